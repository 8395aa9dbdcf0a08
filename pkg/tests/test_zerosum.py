import itertools
import random

import pytest

from algebra import GroupSpec, enumerate_elements, group_scale, group_sum
from config import override_settings
from errors import CapExceededError, GroupSpecError, ParameterError
from zerosum import (
    GSequence,
    ReachabilityLayers,
    find_sidon_violation,
    find_zero_sum_subsequence,
    is_sidon_set,
    is_zero_free_set,
)


def _brute_force(seq: GSequence, r: int) -> bool:
    spec = seq.spec
    terms = seq.elements()
    return any(
        group_sum(spec, [terms[i] for i in picked]) == spec.identity
        for picked in itertools.combinations(range(len(terms)), r)
    )


def _brute_force_mults(seq: GSequence, r: int) -> bool:
    # every choice of copies per distinct element adding up to r
    spec = seq.spec
    for copies in itertools.product(*(range(m + 1) for _, m in seq.items)):
        if sum(copies) != r:
            continue
        terms = [group_scale(spec, x, c) for (x, _), c in zip(seq.items, copies)]
        if group_sum(spec, terms) == spec.identity:
            return True
    return False


def _random_sequence(rng: random.Random, spec: GroupSpec, elements, length: int) -> GSequence:
    return GSequence.from_elements(spec, [rng.choice(elements) for _ in range(length)])


def _elements(text: str):
    spec = GroupSpec.parse(text)
    return spec, list(enumerate_elements(spec))


def test_sequence_is_a_multiset():
    spec, (a, b, c, d) = _elements("Z2^2")
    seq = GSequence.from_elements(spec, [d, a, d, b])
    assert seq.length == 4
    assert seq.support == (a, b, d)
    assert seq.elements() == [a, b, d, d]
    assert seq.extend({c: 2}).length == 6


def test_sequence_validation():
    spec, (a, *_rest) = _elements("Z3")
    with pytest.raises(ParameterError):
        GSequence(spec, ((a, 0),))
    with pytest.raises(ParameterError):
        GSequence(spec, ((a, 1), (a, 2)))
    with pytest.raises(GroupSpecError):
        GSequence.from_elements(spec, [GroupSpec.parse("Z2^2").identity])


def test_egz_example():
    spec, (zero, one, two) = _elements("Z3")
    seq = GSequence.from_mults(spec, {zero: 2, one: 2})
    assert find_zero_sum_subsequence(seq, 3) is None
    seq = seq.extend({two: 1})
    witness = find_zero_sum_subsequence(seq, 3)
    assert witness is not None
    assert witness.validate(seq, 3)


def test_witness_prefers_earlier_elements():
    spec, (zero, one, two) = _elements("Z3")
    seq = GSequence.from_mults(spec, {zero: 3, one: 3, two: 3})
    witness = find_zero_sum_subsequence(seq, 3)
    assert witness.picks == ((zero, 3),)


def test_short_sequence_and_bad_length():
    spec, (zero, *_rest) = _elements("Z2")
    seq = GSequence.from_mults(spec, {zero: 1})
    assert find_zero_sum_subsequence(seq, 2) is None
    with pytest.raises(ParameterError):
        find_zero_sum_subsequence(seq, 0)


@pytest.mark.parametrize("group, cap", [("Z2^2", 3), ("Z3", 4)])
def test_detector_matches_brute_force(group, cap):
    spec, elements = _elements(group)
    for mults in itertools.product(range(cap + 1), repeat=len(elements)):
        if sum(mults) > 10:
            continue
        seq = GSequence.from_mults(spec, dict(zip(elements, mults)))
        for r in range(1, min(seq.length, 6) + 1):
            witness = find_zero_sum_subsequence(seq, r)
            assert (witness is not None) == _brute_force(seq, r), (mults, r)
            if witness is not None:
                assert witness.validate(seq, r)


def test_witness_validate_rejects_tampering():
    spec, (a, b, c, d) = _elements("Z2^2")
    seq = GSequence.from_elements(spec, [a, b, c, d])
    witness = find_zero_sum_subsequence(seq, 4)
    assert witness.validate(seq, 4)
    assert not witness.validate(seq, 3)
    assert not witness.validate(GSequence.from_elements(spec, [a, b, c]), 4)


def test_zero_free_sets():
    spec, elements = _elements("Z2^2")
    check = is_zero_free_set(spec, elements, 4)
    assert not check.is_zero_free
    assert group_sum(spec, list(check.violating)) == spec.identity
    assert len(check.violating) == 4
    assert is_zero_free_set(spec, elements[:3], 4).is_zero_free
    with pytest.raises(ParameterError):
        is_zero_free_set(spec, [elements[0], elements[0]], 2)


def test_cap_is_zero_free_of_rank_three():
    spec = GroupSpec.parse("Z3^2")
    cap = [spec.element(c) for c in [(0, 0), (0, 1), (1, 0), (1, 1)]]
    assert is_zero_free_set(spec, cap, 3).is_zero_free
    line = [spec.element(c) for c in [(0, 0), (1, 1), (2, 2)]]
    assert not is_zero_free_set(spec, line, 3).is_zero_free


def test_sidon_sets():
    spec = GroupSpec.parse("Z2^4")
    basis = [spec.element(c) for c in [(0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]]
    assert is_sidon_set(spec, basis + [spec.element((1, 1, 1, 1))])
    bad = basis + [spec.element((1, 1, 0, 0))]
    violation = find_sidon_violation(spec, bad)
    assert violation is not None
    (a, b), (c, d) = violation
    assert {a, b} != {c, d}
    assert group_sum(spec, [a, b]) == group_sum(spec, [c, d])


def test_sidon_in_binary_groups_is_zero_free_of_rank_four():
    spec, elements = _elements("Z2^3")
    for size in range(4, 6):
        for subset in itertools.combinations(elements, size):
            assert is_sidon_set(spec, subset) == is_zero_free_set(spec, subset, 4).is_zero_free


def test_dp_cell_cap():
    override_settings(dp_cell_cap=10)
    spec, elements = _elements("Z2^2")
    with pytest.raises(CapExceededError):
        find_zero_sum_subsequence(GSequence.from_elements(spec, elements), 4)


def test_reachability_layers_follow_the_detector():
    spec, elements = _elements("Z3")
    state = ReachabilityLayers(spec, 3)
    assert state.can_add(0)
    state = state.add(0, 2)
    assert not state.can_add(0)
    assert state.can_add(1)
    state = state.add(1, 2)
    assert not state.can_add(2)
    seq = GSequence.from_mults(spec, {elements[0]: 2, elements[1]: 2})
    assert find_zero_sum_subsequence(seq, 3) is None


SMALL_GROUPS = ["Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z9", "Z2^2", "Z2^3", "Z2xZ4", "Z3^2"]


@pytest.mark.parametrize("group", SMALL_GROUPS)
def test_detector_matches_brute_force_on_random_sequences(group):
    spec, elements = _elements(group)
    rng = random.Random(group)
    for _ in range(40):
        seq = _random_sequence(rng, spec, elements, rng.randint(1, 12))
        for r in range(1, min(seq.length, 6) + 1):
            witness = find_zero_sum_subsequence(seq, r)
            assert (witness is not None) == _brute_force_mults(seq, r), (seq.items, r)
            if witness is not None:
                assert witness.validate(seq, r)


@pytest.mark.parametrize("group", ["Z4", "Z6", "Z2^3", "Z3^2"])
def test_zero_freeness_is_monotone(group):
    spec, elements = _elements(group)
    rng = random.Random(group)
    for _ in range(40):
        seq = _random_sequence(rng, spec, elements, rng.randint(2, 12))
        r = rng.randint(1, min(seq.length, 6))
        witness = find_zero_sum_subsequence(seq, r)
        if witness is None:
            terms = seq.elements()
            for cut in range(1, len(terms)):
                shorter = GSequence.from_elements(spec, terms[cut:])
                assert find_zero_sum_subsequence(shorter, r) is None
        else:
            padded = seq.extend({rng.choice(elements): rng.randint(1, 3)})
            assert find_zero_sum_subsequence(padded, r) is not None


@pytest.mark.parametrize("d", range(2, 11))
def test_sidon_is_zero_free_of_rank_four_on_random_sets(d):
    spec = GroupSpec.elementary(2, d)
    rng = random.Random(d)
    for _ in range(30):
        size = rng.randint(4, min(spec.order, 12))
        subset = [spec.from_packed(p) for p in rng.sample(range(spec.order), size)]
        assert is_sidon_set(spec, subset) == is_zero_free_set(spec, subset, 4).is_zero_free
