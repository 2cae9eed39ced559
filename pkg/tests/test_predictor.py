import random

import pytest
from hypothesis import given, settings, strategies as st

from codeplan import EvaluatedSet, PathSpec, predict_accuracy, predict_average_accuracy
from codeplan.model import ValidationError
from codeplan.predictor import EmptyKnownSet, predict_many
from codeplan.throughput import BaselineMetrics, Bottleneck, PathThroughput

N_F = 100


def idw_oracle(candidate, known, n_f=N_F):
    """Plain-loop inverse-distance weighting, written from the formula."""
    num = den = 0.0
    c = candidate.vector(n_f)
    for path, acc in known:
        d = sum((a - b) ** 2 for a, b in zip(c, path.vector(n_f))) ** 0.5
        if d == 0:
            return acc
        num += acc / d
        den += 1 / d
    return num / den


def test_single_point():
    known = [(PathSpec.cross(0, 1, 1, 5), 0.8)]
    for p in [PathSpec.cross(0, 2, 3, 4), PathSpec.skip(1, 3)]:
        assert predict_accuracy(p, known, N_F) == 0.8


def test_equal_weights():
    known = [(PathSpec.cross(0, 1, 1, 5), 0.8), (PathSpec.cross(0, 1, 3, 5), 0.9)]
    assert predict_accuracy(PathSpec.cross(0, 1, 2, 5), known, N_F) == pytest.approx(0.85, abs=1e-12)


def test_worked_example():
    known = [(PathSpec.cross(0, 1, 1, 5), 0.8), (PathSpec.cross(0, 1, 5, 5), 0.9)]
    # distances 1 and 3: (0.8/1 + 0.9/3) / (1 + 1/3)
    assert predict_accuracy(PathSpec.cross(0, 1, 2, 5), known, N_F) == pytest.approx(0.825, abs=1e-12)


def test_empty_known_set():
    with pytest.raises(EmptyKnownSet):
        predict_accuracy(PathSpec.cross(0, 1, 2, 5), [], N_F)


def test_duplicate_rejected():
    with pytest.raises(ValidationError):
        EvaluatedSet([(PathSpec.skip(0, 3), 0.5), (PathSpec.skip(0, 3, n_f=7), 0.6)])


def test_average_accuracy():
    tp = PathThroughput(3.0, 1.0, 4.0, 1.0, 1.0, Bottleneck.LOCAL)
    base = BaselineMetrics(th_0=2.0, t_0=1.0, a_0=0.9)
    assert predict_average_accuracy(PathSpec.skip(0, 2), 0.7, tp, base) == pytest.approx(0.85, abs=1e-15)
    half = PathThroughput(2.0, 2.0, 4.0, 1.0, 1.0, Bottleneck.LOCAL)
    base = BaselineMetrics(th_0=2.0, t_0=1.0, a_0=0.8)
    assert predict_average_accuracy(PathSpec.skip(0, 2), 0.6, half, base) == pytest.approx(0.7, abs=1e-15)
    idle = PathThroughput(2.0, 0.0, 2.0, 1.0, 0.0, Bottleneck.LOCAL)
    assert predict_average_accuracy(PathSpec.skip(0, 2), 0.1, idle, base) == 0.8


def _random_paths(rng, n):
    seen = {}
    while len(seen) < n:
        lout = rng.randint(0, 6)
        lin = rng.randint(lout + 1, 7)
        if rng.random() < 0.2:
            p = PathSpec.skip(lout, lin)
        else:
            hin = rng.randint(0, 6)
            p = PathSpec.cross(lout, hin, rng.randint(hin, 6), lin)
        seen[p.key()] = p
    return list(seen.values())


def test_matches_loop_oracle():
    rng = random.Random(0)
    for _ in range(500):
        paths = _random_paths(rng, rng.randint(2, 12))
        known = [(p, rng.random()) for p in paths[1:]]
        got = predict_accuracy(paths[0], known, N_F)
        assert got == pytest.approx(idw_oracle(paths[0], known), rel=1e-12, abs=1e-15)


def test_vectorized_matches_single():
    rng = random.Random(1)
    paths = _random_paths(rng, 40)
    known = EvaluatedSet((p, rng.random()) for p in paths[:10])
    many = predict_many(paths, known, N_F)
    assert list(many) == [predict_accuracy(p, known, N_F) for p in paths]


path_st = st.one_of(
    st.builds(
        lambda lout, gap, hin, hl: PathSpec.cross(lout, hin, hin + hl, lout + gap),
        st.integers(0, 5), st.integers(1, 5), st.integers(0, 5), st.integers(0, 5),
    ),
    st.builds(lambda lout, gap: PathSpec.skip(lout, lout + gap), st.integers(0, 5), st.integers(1, 5)),
)
known_st = st.lists(st.tuples(path_st, st.floats(0, 1)), min_size=1, max_size=15,
                    unique_by=lambda t: t[0].key())


@settings(max_examples=300)
@given(path_st, known_st, st.randoms(use_true_random=False))
def test_convex_and_permutation_invariant(cand, known, rnd):
    a = predict_accuracy(cand, known, N_F)
    accs = [acc for _, acc in known]
    assert min(accs) <= a <= max(accs)
    shuffled = list(known)
    rnd.shuffle(shuffled)
    assert predict_accuracy(cand, shuffled, N_F) == a


@given(known_st)
def test_reproduces_known_exactly(known):
    for path, acc in known:
        assert predict_accuracy(path, known, N_F) == acc


def test_locality():
    # moving one known point toward the candidate pulls the prediction toward it
    cand = PathSpec.cross(0, 0, 0, 1)
    others = [(PathSpec.cross(0, 3, 5, 6), 0.2), (PathSpec.skip(2, 6), 0.4)]
    preds = []
    for h in range(6, 0, -1):
        mover = (PathSpec.cross(0, 0, h, 1), 0.9)
        preds.append(predict_accuracy(cand, others + [mover], N_F))
    assert all(b > a for a, b in zip(preds, preds[1:]))
    assert all(p < 0.9 for p in preds)
