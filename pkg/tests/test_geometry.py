import io
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lqn.algebra import a, t
from lqn.geometry import (
    Point,
    RepresentationFormatError,
    SamePoint,
    build_doubled,
    build_lyndon,
    degree_counts,
    index_point,
    point_index,
    read_representation,
    slope_label,
    slope_matrix,
    write_representation,
)
from lqn.gf import NotAPrimePower, build_field
from lqn.verify import verify_full
from oracles import naive_slope

PRIME_POWERS_13 = [2, 3, 4, 5, 7, 8, 9, 11, 13]


def P(x, y, copy=0):
    return Point(copy, x, y)


def test_slope_examples():
    f5 = build_field(5)
    assert slope_label(f5, P(0, 0), P(1, 1)) == a(1)
    assert slope_label(f5, P(2, 3), P(2, 4)) == a(5)
    f2 = build_field(2)
    assert slope_label(f2, P(0, 0), P(1, 0)) == a(0)


def test_slope_gf4():
    f = build_field(4)
    for x in range(1, 4):
        assert slope_label(f, P(0, 0), P(x, f.mul(x, x))) == a(x)


def test_slope_errors():
    f = build_field(3)
    with pytest.raises(SamePoint):
        slope_label(f, P(1, 2), P(1, 2))
    with pytest.raises(ValueError):
        slope_label(f, P(0, 0), P(0, 1, copy=1))


@pytest.mark.parametrize("q", [2, 3, 5, 7, 11])
def test_slopes_match_modular_arithmetic(q):
    f = build_field(q)
    sm = slope_matrix(f)
    pts = [(x, y) for x in range(q) for y in range(q)]
    for i, p1 in enumerate(pts):
        for j, p2 in enumerate(pts):
            if i != j:
                assert sm[i, j] == naive_slope(q, p1, p2)
                assert slope_label(f, P(*p1), P(*p2)) == a(naive_slope(q, p1, p2))


@pytest.mark.parametrize("q", PRIME_POWERS_13)
def test_slope_matrix_matches_scalar_path(q):
    f = build_field(q)
    sm = slope_matrix(f)
    for i in range(q * q):
        for j in range(q * q):
            if i != j:
                p1, p2 = index_point(q, i), index_point(q, j)
                assert a(int(sm[i, j])) == slope_label(f, p1, p2) == slope_label(f, p2, p1)


def test_point_index_roundtrip():
    q = 7
    for idx in range(2 * q * q):
        assert point_index(q, index_point(q, idx)) == idx
    assert point_index(q, Point(1, 2, 3)) == 49 + 17


@pytest.mark.parametrize("q", PRIME_POWERS_13)
def test_lyndon_degrees(q):
    m = build_lyndon(q)
    assert m.V == q * q
    deg = degree_counts(m)
    assert np.all(deg[:, 0] == 1)
    assert np.all(deg[:, 1 : q + 2] == q - 1)
    assert np.array_equal(m.labels, m.labels.T)
    m.check_shape()


@pytest.mark.parametrize("q", PRIME_POWERS_13)
def test_doubled_structure(q):
    m = build_doubled(q)
    q2 = q * q
    assert m.V == 2 * q2 and m.n == 1
    deg = degree_counts(m)
    assert np.all(deg[:, q + 2] == q2)
    assert np.all(deg[:, 1 : q + 2] == q - 1)
    assert np.array_equal(m.labels[:q2, :q2], m.labels[q2:, q2:])
    assert np.all(m.labels[:q2, q2:] == q + 2)


def test_doubled_q2_counts():
    m = build_doubled(2)
    lab = m.labels
    iu = np.triu_indices(m.V, 1)
    assert int((lab[iu] == m.structure().index(t(1))).sum()) == 16
    assert int(((lab[iu] >= 1) & (lab[iu] <= 3)).sum()) == 12


def test_lyndon_q2_neighbours():
    deg = degree_counts(build_lyndon(2))
    assert np.all(deg[:, 1:4] == 1)


@pytest.mark.parametrize("q", [q for q in PRIME_POWERS_13 if q >= 3])
def test_lyndon_verifies(q):
    m = build_lyndon(q)
    assert verify_full(m, m.structure()).valid


def test_lyndon_q2_only_misses_a_self_witnesses():
    # Lines of the order-2 plane have two points, so a_i;a_i ∋ a_i has no witness.
    m = build_lyndon(2)
    res = verify_full(m, m.structure(), exhaustive=True)
    assert not res.valid
    assert len(res.violations) == 12
    for v in res.violations:
        c, d, e = v.atoms
        assert v.kind == "MissingWitness" and c == d == e


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([3, 4, 5, 7, 8, 9]), st.data())
def test_translation_invariance(q, data):
    f = build_field(q)
    c = data.draw(st.integers(0, q - 1))
    d = data.draw(st.integers(0, q - 1))
    m = build_lyndon(q)
    perm = np.array([point_index(q, Point(0, f.add(p.a, c), f.add(p.b, d)))
                     for p in (index_point(q, i) for i in range(q * q))])
    assert np.array_equal(m.labels[np.ix_(perm, perm)], m.labels)


@pytest.mark.parametrize("builder,q", [(build_lyndon, 4), (build_doubled, 3), (build_lyndon, 13)])
def test_file_roundtrip(builder, q):
    m = builder(q)
    buf = io.StringIO()
    write_representation(m, buf)
    text = buf.getvalue()
    assert text.startswith(f"LQN v1 q={q} n={m.n} V={m.V}\n")
    back = read_representation(io.StringIO(text))
    assert (back.q, back.n) == (m.q, m.n)
    assert np.array_equal(back.labels, m.labels)
    buf2 = io.StringIO()
    write_representation(back, buf2)
    assert buf2.getvalue() == text


def test_file_roundtrip_colored():
    from lqn.coloring import randomize_t_colors

    m = randomize_t_colors(build_doubled(3), 4, seed=7)
    buf = io.StringIO()
    write_representation(m, buf)
    back = read_representation(io.StringIO(buf.getvalue()))
    assert back.n == 4 and np.array_equal(back.labels, m.labels)


def _text(m):
    buf = io.StringIO()
    write_representation(m, buf)
    return buf.getvalue().splitlines(keepends=True)


@pytest.mark.parametrize(
    "mutate,line",
    [
        (lambda ls: ls[:-1], 10),  # truncated
        (lambda ls: ["LQN v2 q=3 n=0 V=9\n"] + ls[1:], 1),
        (lambda ls: [ls[0], ls[1].replace("a0", "b0", 1)] + ls[2:], 2),
        (lambda ls: ls[:3] + [ls[3].rsplit(" ", 1)[0] + "\n"] + ls[4:], 4),
        (lambda ls: ls + ["a0\n"], 11),
        (lambda ls: [], 1),
    ],
)
def test_read_errors_name_the_line(mutate, line):
    lines = mutate(_text(build_lyndon(3)))
    with pytest.raises(RepresentationFormatError) as exc:
        read_representation(io.StringIO("".join(lines)))
    assert exc.value.line == line


def test_read_rejects_bad_diagonal():
    lines = _text(build_lyndon(3))
    toks = lines[1].split()
    toks[0] = "a0"
    lines[1] = " ".join(toks) + "\n"
    with pytest.raises(RepresentationFormatError):
        read_representation(io.StringIO("".join(lines)))


@pytest.mark.parametrize("q", [1, 6, 10])
def test_non_prime_powers_rejected(q):
    with pytest.raises(NotAPrimePower):
        build_lyndon(q)
    with pytest.raises(NotAPrimePower):
        build_doubled(q)


def test_neighbor_bitsets_match_scan():
    m = build_doubled(3)
    rng = random.Random(1)
    for _ in range(200):
        x, y = rng.sample(range(m.V), 2)
        d, e = rng.randrange(1, m.atom_count), rng.randrange(1, m.atom_count)
        zs = [z for z in range(m.V) if m.labels[x, z] == d and m.labels[z, y] == e]
        assert list(m.witnesses(x, y, d, e)) == zs
        assert m.has_witness(x, y, d, e) == bool(zs)
