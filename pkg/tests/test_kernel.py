import json

import pytest

from asymauto import (
    Checkpoints,
    RangeError,
    Word,
    check_labeling_consistency,
    cluster_kernel,
    enumerate_kernel,
    enumerate_smooth,
    label_word,
    quotient_to_json,
    seq_leading_prime,
    seq_run_parity,
    seq_sqrt_parity,
    seq_two_three,
)

CPS18 = Checkpoints.geometric(1 << 10, 1 << 18)


def two_three():
    return seq_two_three(enumerate_smooth(1 << 24))


def test_enumerate_kernel_counts():
    f = seq_run_parity()
    assert len(enumerate_kernel(f, 2, 0)) == 1
    assert len(enumerate_kernel(f, 2, 2)) == 7
    assert len(enumerate_kernel(f, 3, 3)) == 40
    el = enumerate_kernel(f, 2, 2)[4]
    assert (el.depth, el.residue) == (2, 1)
    assert el(5) == f(4 * 5 + 1)


def test_leading_prime_single_class_small():
    q = cluster_kernel(seq_leading_prime(), 2, 3, CPS18, 1e-2)
    assert q.class_count == 1
    assert q.classes_by_depth == (1, 1, 1, 1)
    assert q.finiteness == "stable"
    assert len(q.classes[0].members) == 15


def test_cluster_determinism():
    a = cluster_kernel(seq_sqrt_parity(), 2, 2, CPS18, 1e-2)
    b = cluster_kernel(seq_sqrt_parity(), 2, 2, CPS18, 1e-2)
    assert a.labels == b.labels
    assert a.classes == b.classes
    assert (a.matrix == b.matrix).all()


def test_tau_monotonicity():
    # a stricter threshold can only split classes, never merge them
    for seq in (two_three(), seq_sqrt_parity()):
        counts = [
            cluster_kernel(seq, 2, 3, CPS18, tau).class_count
            for tau in (1e-3, 1e-2, 1e-1, 0.25)
        ]
        assert counts == sorted(counts, reverse=True)


def test_two_three_labels_at_derived_tau():
    # tau=0.25 resolves the two sign classes at this scale (see repo notes)
    q = cluster_kernel(two_three(), 2, 3, CPS18, 0.25)
    assert q.class_count == 2
    eps = Word(2, ())
    zero = Word(2, (0,))
    zerozero = Word(2, (0, 0))
    assert label_word(q, eps) == 0
    assert label_word(q, zero) != label_word(q, eps)
    assert label_word(q, zerozero) == label_word(q, eps)
    assert check_labeling_consistency(q) == []


def test_two_three_base3_depth_coherence():
    q = cluster_kernel(two_three(), 3, 2, CPS18, 0.25)
    assert q.class_count == 2
    assert q.finiteness == "stable"


def test_representatives_are_minimal_and_labeled_consistently():
    q = cluster_kernel(seq_sqrt_parity(), 2, 2, CPS18, 1e-2)
    order = [(a, r) for a in range(3) for r in range(2**a)]
    assert set(q.labels) == set(order)
    for cid, cls in enumerate(q.classes):
        assert cls.rep == min(cls.members, key=order.index)
        assert q.labels[cls.rep] == cid
    # profiles exist for every element and are non-decreasing
    for er, counts in q.profiles.items():
        assert list(counts) == sorted(counts)
    assert q.matrix.shape == (7, 7)
    assert (q.matrix.diagonal() == 0).all()


def test_label_word_validation():
    q = cluster_kernel(seq_sqrt_parity(), 2, 1, CPS18, 1e-2)
    with pytest.raises(ValueError):
        label_word(q, Word(3, (1,)))
    with pytest.raises(ValueError):
        label_word(q, Word(2, (1, 0)))


def test_overflow_rejected():
    with pytest.raises(RangeError):
        cluster_kernel(seq_run_parity(), 2, 62, CPS18, 1e-2)


def test_quotient_json_roundtrip():
    q = cluster_kernel(two_three(), 2, 2, CPS18, 0.25)
    obj = json.loads(quotient_to_json(q))
    assert obj["base"] == 2
    assert obj["depth"] == 2
    assert obj["tau"] == 0.25
    assert obj["labels"][""] == 0
    assert obj["labels"]["0"] == 1
    assert obj["labels"]["00"] == 0
    assert len(obj["labels"]) == 7
    assert obj["violations"] == []
    assert len(obj["pairwise_final_counts"]) == 7
    assert obj["classes"][0]["representative"] == {"alpha": 0, "r": 0}
