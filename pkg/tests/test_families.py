import itertools

import pytest

from zfcirc.circulant import CirculantSpec, canonical_form, format_spec, is_connected_gcd, normalize
from zfcirc.families import (
    FamilyDescriptor,
    FamilyKind,
    FamilyParameterError,
    classify,
    classify_detailed,
    enumerate_family_instances,
    expand_family,
    mr_lower_bound,
    predict_z,
    verify_prime_uniqueness,
)
from zfcirc.solver import bounds_report, solve_exact


class TestExpand:
    def test_consecutive(self):
        spec = expand_family(FamilyDescriptor(FamilyKind.CONSECUTIVE), 8, 4)
        assert spec.powers == (0, 1, 2, 3)

    def test_progression_complement(self):
        desc = FamilyDescriptor(
            FamilyKind.PROGRESSION_COMPLEMENT,
            removed_start=0, removed_step=2, removed_count=2,
        )
        assert expand_family(desc, 6, 4).powers == (1, 3, 4, 5)

    def test_progression_rejects_full_cycle(self):
        desc = FamilyDescriptor(
            FamilyKind.PROGRESSION_COMPLEMENT,
            removed_start=0, removed_step=2, removed_count=3,
        )
        with pytest.raises(FamilyParameterError):
            expand_family(desc, 6, 3)

    def test_progression_rejects_coprime_step(self):
        desc = FamilyDescriptor(
            FamilyKind.PROGRESSION_COMPLEMENT,
            removed_start=1, removed_step=3, removed_count=1,
        )
        with pytest.raises(FamilyParameterError):
            expand_family(desc, 7, 6)

    def test_block_partial_verified_condition(self):
        # run of one class over three: known not to meet the floor; the
        # verified reading rejects, the literal readings accept
        desc = FamilyDescriptor(
            FamilyKind.BLOCK_STEP_PARTIAL,
            modulus=3, step=1, anchor=0, run_length=1,
        )
        with pytest.raises(FamilyParameterError):
            expand_family(desc, 6, 3)
        spec = expand_family(desc, 6, 3, reading="literal-run")
        assert spec.powers == (0, 1, 4)
        assert solve_exact(spec).z == 5  # the literal reading over-claims here

    def test_block_full_variant(self):
        desc = FamilyDescriptor(
            FamilyKind.BLOCK_STEP_FULL,
            modulus=4, step=2, anchor=1, run_length=1,
        )
        spec = expand_family(desc, 8, 7)
        assert spec.powers == (0, 1, 2, 3, 4, 6, 7)

    def test_block_rejects_wrong_variant(self):
        desc = FamilyDescriptor(
            FamilyKind.BLOCK_STEP_FULL,
            modulus=4, step=2, anchor=2, run_length=1,
        )
        with pytest.raises(FamilyParameterError):
            expand_family(desc, 8, 7)


class TestClassify:
    def test_consecutive_family(self):
        found = classify(CirculantSpec(8, (0, 1, 2, 3)))
        assert [d.kind for d in found] == [FamilyKind.CONSECUTIVE]

    def test_progression_complement_member(self):
        kinds = {d.kind for d in classify(CirculantSpec(6, (1, 3, 4, 5)))}
        assert FamilyKind.PROGRESSION_COMPLEMENT in kinds

    def test_no_family(self):
        assert classify(CirculantSpec(7, (0, 1, 3))) == []
        assert solve_exact(CirculantSpec(7, (0, 1, 3))).z > 4

    def test_orbit_membership_not_just_literal_match(self):
        # {0,1,3} at n=5 is affine to the consecutive run via doubling
        found = classify(CirculantSpec(5, (0, 1, 3)))
        assert [d.kind for d in found] == [FamilyKind.CONSECUTIVE]
        assert solve_exact(CirculantSpec(5, (0, 1, 3))).z == 4

    def test_expand_classify_round_trip(self):
        for n in range(3, 9):
            for desc, spec in enumerate_family_instances(n):
                kinds = {d.kind for d in classify(spec)}
                assert desc.kind in kinds, (format_spec(spec), desc)

    def test_detailed_reports_disagreement(self):
        doc = classify_detailed(CirculantSpec(6, (0, 1, 4)))
        assert doc["reading_disagreement"] is True
        assert doc["families"] == []
        assert doc["readings"]["literal-run"]

    def test_disconnected_classifies_empty(self):
        assert classify(CirculantSpec(6, (0, 2, 4))) == []


class TestPredict:
    def test_examples(self):
        assert predict_z(CirculantSpec(3, (0, 1, 2))) == 4
        assert predict_z(CirculantSpec(8, (0, 1, 2, 3))) == 6
        assert predict_z(CirculantSpec(7, (0, 1, 3))) is None

    def test_prediction_inside_bounds(self):
        for n in range(3, 10):
            for powers in itertools.combinations(range(n), 3):
                spec = normalize(CirculantSpec(n, powers))
                if not is_connected_gcd(spec):
                    continue
                predicted = predict_z(spec)
                if predicted is None:
                    continue
                report = bounds_report(spec)
                assert report.best_lower <= predicted <= report.best_upper


class TestSoundnessAndCompleteness:
    def test_family_instances_meet_floor_small(self):
        seen = set()
        for n in range(3, 9):
            for _, spec in enumerate_family_instances(n):
                if spec.powers in seen:
                    continue
                seen.add(spec.powers)
                assert solve_exact(normalize(spec)).z == 2 * (spec.k - 1), format_spec(spec)

    def test_floor_specs_all_classified_small(self):
        from zfcirc.isomorphism import connected_canonical_specs

        for n in range(2, 9):
            for k in range(2, min(n, 5) + 1):
                for rep in connected_canonical_specs(n, k):
                    if solve_exact(rep).z == 2 * (k - 1):
                        assert classify(rep), format_spec(rep)


class TestPrimeUniqueness:
    def test_small_primes(self):
        for n in (3, 5, 7):
            report = verify_prime_uniqueness(n, 3)
            assert report.ok, report

    def test_rejects_composite(self):
        with pytest.raises(ValueError):
            verify_prime_uniqueness(6, 3)


class TestMrBound:
    def test_examples(self):
        assert mr_lower_bound(CirculantSpec(8, (0, 1, 2, 3)), 6) == 10
        assert mr_lower_bound(CirculantSpec(3, (0, 1, 2)), 4) == 2
        assert mr_lower_bound(CirculantSpec(6, (0, 1, 3)), 5) == 7
