"""Families of circulant specs whose forcing number meets the 2(k-1) floor.

Membership is decided by generate-and-compare: enumerate valid parameter
tuples for (n, k), expand each to a power set, and test it against the
affine orbit of the input.  Four families:

* consecutive            -- powers {0, 1, ..., k-1}
* progression-complement -- all powers except an arithmetic progression
                            whose step shares a factor with n
* block-step-full        -- union of full cosets of <c> plus a partial block:
                            one anchor power and l full classes mod d stepping
                            by a, where the step's own block is full
* block-step-partial     -- same shape, but the step lies inside the partial
                            block itself

The partial variant needs a side condition.  The text source for it is
ambiguous (two readings of an overloaded symbol), and neither literal reading
matches exhaustive solver measurements; the default "verified" condition
(c >= 2, or the run covers at least half the block's classes, 2l >= d/c) is
exact on every tuple with n <= 12 and on n = 16 spot checks.  Both literal
readings stay available for comparison and are surfaced by
``classify_detailed``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Literal

from .circulant import (
    CirculantSpec,
    affine_orbit,
    canonical_form,
    format_spec,
    is_connected_gcd,
    normalize,
)

InnerReading = Literal["verified", "literal-run", "literal-regularity"]


class FamilyKind(str, Enum):
    CONSECUTIVE = "consecutive"
    PROGRESSION_COMPLEMENT = "progression-complement"
    BLOCK_STEP_FULL = "block-step-full"
    BLOCK_STEP_PARTIAL = "block-step-partial"


class FamilyParameterError(ValueError):
    """Parameter tuple violates the family's validity conditions."""


@dataclass(frozen=True)
class FamilyDescriptor:
    """One parameterization of a family instance.

    Only the fields relevant to ``kind`` are set: the progression complement
    uses (removed_start, removed_step, removed_count); the block families use
    (modulus d, step, block_gcd c, anchor, run_length l, gammas, and offset m
    for the partial variant).
    """

    kind: FamilyKind
    removed_start: int | None = None
    removed_step: int | None = None
    removed_count: int | None = None
    modulus: int | None = None
    step: int | None = None
    block_gcd: int | None = None
    anchor: int | None = None
    run_length: int | None = None
    offset: int | None = None
    gammas: tuple[int, ...] | None = None

    def to_json_dict(self) -> dict:
        doc: dict = {"kind": self.kind.value}
        for name in (
            "removed_start", "removed_step", "removed_count",
            "modulus", "step", "block_gcd", "anchor", "run_length", "offset",
        ):
            value = getattr(self, name)
            if value is not None:
                doc[name] = value
        if self.gammas is not None:
            doc["gammas"] = list(self.gammas)
        return doc


def _inner_condition_holds(
    c: int, q: int, l: int, m: int, k: int, reading: InnerReading
) -> bool:
    if reading == "verified":
        return c >= 2 or 2 * l >= q
    if reading == "literal-run":
        return l > m and c <= m + 2 * (l - m)
    if reading == "literal-regularity":
        return l > m and c <= m + 2 * k
    raise ValueError(f"unknown reading {reading!r}")


def _expand_block(
    desc: FamilyDescriptor, n: int, reading: InnerReading
) -> CirculantSpec:
    d, step, beta, l = desc.modulus, desc.step, desc.anchor, desc.run_length
    if d is None or step is None or beta is None or l is None:
        raise FamilyParameterError("block families need modulus, step, anchor, run_length")
    if not (2 <= d < n) or n % d:
        raise FamilyParameterError(f"modulus {d} must be a proper divisor >= 2 of {n}")
    if not (1 <= step % d):
        raise FamilyParameterError("step must be nonzero modulo the modulus")
    c = math.gcd(d, step)
    if desc.block_gcd is not None and desc.block_gcd != c:
        raise FamilyParameterError(f"block_gcd {desc.block_gcd} != gcd({d}, {step}) = {c}")
    q = d // c
    if not (1 <= l <= q - 1):
        raise FamilyParameterError(f"run_length {l} outside [1, {q - 1}]")
    partial = beta % c == 0
    if desc.kind is FamilyKind.BLOCK_STEP_FULL:
        if partial:
            raise FamilyParameterError("full-step variant needs the step outside the anchor's block")
    else:
        if not partial:
            raise FamilyParameterError("partial-step variant needs the step inside the anchor's block")
        m = next(t for t in range(q) if (beta + t * step) % d == 0)
        if desc.offset is not None and desc.offset != m:
            raise FamilyParameterError(f"offset {desc.offset} != derived offset {m}")
        k_total = (c - 1) * (n // c) + 1 + l * (n // d)
        if not _inner_condition_holds(c, q, l, m, k_total, reading):
            raise FamilyParameterError(
                f"side condition fails under reading {reading!r} (c={c}, q={q}, l={l}, m={m})"
            )
    powers = {beta % n}
    for t in range(1, l + 1):
        powers.update((beta + t * step + u * d) % n for u in range(n // d))
    for g in range(c):
        if g != beta % c:
            powers.update((g + u * c) % n for u in range(n // c))
    expected = (c - 1) * (n // c) + 1 + l * (n // d)
    if len(powers) != expected:
        raise FamilyParameterError("block pieces collide; parameters invalid")
    return CirculantSpec(n, tuple(sorted(powers)))


def expand_family(
    desc: FamilyDescriptor, n: int, k: int, reading: InnerReading = "verified"
) -> CirculantSpec:
    """Power set of a family instance; raises FamilyParameterError when the
    parameters are inconsistent, collide, or produce a disconnected graph."""
    if desc.kind is FamilyKind.CONSECUTIVE:
        if not (2 <= k <= n):
            raise FamilyParameterError(f"consecutive family needs 2 <= k <= n, got k={k}")
        spec = CirculantSpec(n, tuple(range(k)))
    elif desc.kind is FamilyKind.PROGRESSION_COMPLEMENT:
        start, step, count = desc.removed_start, desc.removed_step, desc.removed_count
        if start is None or step is None or count is None:
            raise FamilyParameterError("progression complement needs start, step, count")
        if count < 1:
            raise FamilyParameterError("removed_count must be >= 1")
        if math.gcd(step, n) <= 1:
            raise FamilyParameterError(f"step {step} must share a factor with {n}")
        order = n // math.gcd(step, n)
        if order <= count:
            raise FamilyParameterError(
                f"step order {order} must exceed removed_count {count}"
            )
        removed = {(start + j * step) % n for j in range(count)}
        if len(removed) != count:
            raise FamilyParameterError("removed progression collides with itself")
        spec = CirculantSpec(n, tuple(p for p in range(n) if p not in removed))
    else:
        spec = _expand_block(desc, n, reading)
    if spec.k != k:
        raise FamilyParameterError(f"expansion has {spec.k} powers, expected k={k}")
    if not is_connected_gcd(normalize(spec)):
        raise FamilyParameterError("expansion is disconnected")
    return spec


def enumerate_family_instances(
    n: int, k: int | None = None, reading: InnerReading = "verified"
) -> Iterator[tuple[FamilyDescriptor, CirculantSpec]]:
    """All valid family instances at half-size n (optionally fixed k).

    Parameter tuples are enumerated exhaustively; duplicates of the same
    power set under different tuples are all yielded (callers dedupe).
    """

    def emit(desc: FamilyDescriptor, kk: int):
        try:
            spec = expand_family(desc, n, kk, reading=reading)
        except FamilyParameterError:
            return None
        return (desc, spec)

    for kk in range(2, n + 1):
        if k is not None and kk != k:
            continue
        out = emit(FamilyDescriptor(FamilyKind.CONSECUTIVE), kk)
        if out:
            yield out
        # progression complement: kk = n - count
        count = n - kk
        if count >= 1:
            for step in range(1, n):
                if math.gcd(step, n) <= 1:
                    continue
                for start in range(n):
                    out = emit(
                        FamilyDescriptor(
                            FamilyKind.PROGRESSION_COMPLEMENT,
                            removed_start=start,
                            removed_step=step,
                            removed_count=count,
                        ),
                        kk,
                    )
                    if out:
                        yield out
        for d in range(2, n):
            if n % d:
                continue
            for step in range(1, d):
                c = math.gcd(d, step)
                q = d // c
                if (c - 1) * (n // c) + 1 > kk:
                    continue
                for l in range(1, q):
                    if (c - 1) * (n // c) + 1 + l * (n // d) != kk:
                        continue
                    for beta in range(n):
                        kind = (
                            FamilyKind.BLOCK_STEP_PARTIAL
                            if beta % c == 0
                            else FamilyKind.BLOCK_STEP_FULL
                        )
                        out = emit(
                            FamilyDescriptor(
                                kind,
                                modulus=d,
                                step=step,
                                block_gcd=c,
                                anchor=beta,
                                run_length=l,
                                offset=(
                                    next(t for t in range(q) if (beta + t * step) % d == 0)
                                    if kind is FamilyKind.BLOCK_STEP_PARTIAL
                                    else None
                                ),
                                gammas=tuple(g for g in range(c) if g != beta % c),
                            ),
                            kk,
                        )
                        if out:
                            yield out


def _descriptor_sort_key(desc: FamilyDescriptor) -> tuple:
    return (
        list(FamilyKind).index(desc.kind),
        desc.removed_step or 0,
        desc.removed_start or 0,
        desc.modulus or 0,
        desc.step or 0,
        desc.anchor or 0,
        desc.run_length or 0,
    )


def classify(
    spec: CirculantSpec, reading: InnerReading = "verified"
) -> list[FamilyDescriptor]:
    """Family memberships of the spec's affine class, one witness per family.

    The whole affine orbit is searched, so membership is up to isomorphism by
    power relabeling; an empty list means no family matched.
    """
    spec = normalize(spec)
    if not is_connected_gcd(spec):
        return []
    orbit = affine_orbit(spec)
    found: dict[FamilyKind, FamilyDescriptor] = {}
    for desc, candidate in enumerate_family_instances(spec.n, spec.k, reading=reading):
        if candidate.powers in orbit:
            prev = found.get(desc.kind)
            if prev is None or _descriptor_sort_key(desc) < _descriptor_sort_key(prev):
                found[desc.kind] = desc
    return sorted(found.values(), key=_descriptor_sort_key)


_ALL_READINGS: tuple[InnerReading, ...] = ("verified", "literal-run", "literal-regularity")


def classify_detailed(spec: CirculantSpec) -> dict:
    """Memberships under every reading of the partial-block side condition,
    with a disagreement flag; readings never get silently merged."""
    per_reading = {
        reading: [d.to_json_dict() for d in classify(spec, reading=reading)]
        for reading in _ALL_READINGS
    }
    kinds = {reading: sorted(d["kind"] for d in descs) for reading, descs in per_reading.items()}
    return {
        "spec": format_spec(normalize(spec)),
        "families": per_reading["verified"],
        "readings": per_reading,
        "reading_disagreement": len(set(map(tuple, kinds.values()))) > 1,
    }


def predict_z(spec: CirculantSpec, reading: InnerReading = "verified") -> int | None:
    """2(k-1) when the spec belongs to a known minimum family, else None."""
    return 2 * (spec.k - 1) if classify(spec, reading=reading) else None


def mr_lower_bound(spec: CirculantSpec, z: int) -> int:
    """Rank floor 2n - z from the nullity/forcing inequality."""
    return 2 * spec.n - z


@dataclass(frozen=True)
class PrimeScanReport:
    """Exhaustive minimum-family check over all k-power specs at a prime n."""

    n: int
    k: int
    orbit_count: int
    floor_orbits: tuple[str, ...]
    ok: bool


def verify_prime_uniqueness(n: int, k: int, budget=None) -> PrimeScanReport:
    """At prime n, the consecutive family should own every spec meeting the
    2(k-1) floor; verified by solving one representative per affine orbit."""
    from .isomorphism import connected_canonical_specs
    from .solver import solve_exact

    if n >= 2 and any(n % p == 0 for p in range(2, int(n**0.5) + 1)):
        raise ValueError(f"{n} is not prime")
    floor = 2 * (k - 1)
    reference = canonical_form(CirculantSpec(n, tuple(range(k))))
    hits = []
    reps = connected_canonical_specs(n, k)
    for rep in reps:
        if solve_exact(rep, budget=budget).z == floor:
            hits.append(format_spec(rep))
    ok = hits == [format_spec(reference)]
    return PrimeScanReport(n=n, k=k, orbit_count=len(reps), floor_orbits=tuple(hits), ok=ok)
