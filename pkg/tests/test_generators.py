import pytest

from perclat.crossings import build_rectangle_cover, square_cover_rect
from perclat.errors import InputError
from perclat.generators import (
    gen_perturbed_lattice,
    gen_square_lattice,
    sample_bond_config,
    sample_config,
    sample_site_config,
    trial_rng,
)
from perclat.lattice import decompose_cells


@pytest.mark.parametrize("n,m", [(1, 1), (3, 2), (5, 5)])
def test_square_lattice_counts(n, m):
    lat = gen_square_lattice(n, m)
    assert len(lat.coords) == (n + 1) * (m + 1)
    assert len(lat.edges) == n * (m + 1) + m * (n + 1)
    assert lat.coords[1 * (n + 1) + 1] == (1.0, 1.0)


def test_zero_jitter_is_the_square_lattice():
    a, b = gen_square_lattice(4, 3), gen_perturbed_lattice(4, 3, 0.0, 9)
    assert a.coords == b.coords and set(a.edges) == set(b.edges)


def test_perturbed_is_deterministic_and_keeps_the_border():
    a, b = gen_perturbed_lattice(5, 5, 0.3, 7), gen_perturbed_lattice(5, 5, 0.3, 7)
    assert a.coords == b.coords
    assert a.coords != gen_perturbed_lattice(5, 5, 0.3, 8).coords
    for v, (x, y) in a.coords.items():
        i, j = v % 6, v // 6
        if i in (0, 5) or j in (0, 5):
            assert (x, y) == (i, j)
        else:
            assert abs(x - i) <= 0.3 and abs(y - j) <= 0.3
    assert len(decompose_cells(a).cells) == 25


def test_bad_parameters():
    with pytest.raises(InputError):
        gen_square_lattice(0, 3)
    with pytest.raises(InputError):
        gen_perturbed_lattice(3, 3, 0.5, 0)
    with pytest.raises(InputError):
        sample_site_config([], 1.5, 0)


def test_sampling_extremes_and_determinism():
    dec = decompose_cells(gen_square_lattice(4, 4))
    assert sample_site_config(dec.ids, 0.0, 1).occupied == frozenset()
    assert sample_site_config(dec.ids, 1.0, 1).occupied == frozenset(dec.ids)
    a = sample_site_config(dec.ids, 0.5, 3, 17)
    assert a == sample_site_config(dec.ids, 0.5, 3, 17)
    assert a != sample_site_config(dec.ids, 0.5, 3, 18)
    cfg = sample_site_config(dec.ids, 0.0, 1, origin=dec.ids[5])
    assert cfg.occupied == {dec.ids[5]} and cfg.origin_cell == dec.ids[5]
    edges = sorted(dec.lattice.edges)
    b = sample_bond_config(edges, 0.5, 2, 4)
    assert b.open_edges | b.closed_edges == set(edges) and not b.open_edges & b.closed_edges


def test_trial_streams_are_independent_of_order():
    first = [trial_rng(5, t).random() for t in range(10)]
    again = [trial_rng(5, t).random() for t in reversed(range(10))][::-1]
    assert first == again


def test_sample_config_on_cover():
    dec = decompose_cells(gen_square_lattice(5, 5))
    cover = build_rectangle_cover(dec, square_cover_rect(5, 5))
    site = sample_config(cover, "site", 1.0, 0)
    assert site.occupied == cover.interior_cells
    bond = sample_config(cover, "bond", 1.0, 0)
    assert bond.open_edges == cover.interior_edges
    with pytest.raises(TypeError):
        sample_config(dec, "bond", 0.5, 0)
