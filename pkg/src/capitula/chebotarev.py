"""Prime search under the six splitting, symbol, and class conditions.

A prime q qualifies for the field L = Q(sqrt(d)), the odd prime p and
the exponent n when

  (1) q does not divide p or disc(L),
  (2) q = 1 (mod p^n),
  (3) the rational units {+-1} are p^n-th powers mod q,
  (4) q splits in L (kronecker(disc, q) = 1),
  (5) the p^n-th power residue symbol of the fundamental unit at a
      prime above q has exact order p^n (divided by phi_scale when the
      unit character is replaced by a p-th power of itself),
  (6) the class of that prime above q is the requested ideal class --
      or its inverse, since the two primes above q are conjugate and
      carry inverse classes; which one matched is recorded.

For odd p condition (3) is automatic (-1 is an odd power of itself)
and conditions (4) + (5) force (2) + (3); that implication is asserted
on every candidate and a violation raises ConsistencyError, because it
cannot happen unless the arithmetic itself is broken.

The searches return the smallest qualifying prime, or an exhaustion
value carrying per-condition failure counts so a caller can see which
condition is starving the scan.
"""

from __future__ import annotations

import math
from concurrent import futures
from dataclasses import dataclass

from . import arith
from .errors import ConsistencyError
from .quadfield import (
    QuadraticField,
    class_group,
    fundamental_unit,
    ideal_class_of,
    make_field,
    prime_ideal_above,
)

DEFAULT_Q_BOUND = 10**6

_COND3_NOTE = "automatic for odd p: (-1)^(p^n) = -1, so {+-1} are p^n-th powers"

_COND_NAMES = ("cond1", "cond2", "cond3", "cond4", "cond5", "cond6")


@dataclass(frozen=True)
class LambdaSpec:
    """Which power of the unit character is in force.

    phi_scale = p^m' replaces the character by its p^m'-th power; the
    symbol of the fundamental unit is then required to have exact
    order p^n / phi_scale instead of p^n.  Desk runs keep it at 1.
    """

    p: int
    n: int
    phi_scale: int = 1

    def __post_init__(self):
        if self.p == 2 or not arith.is_prime(self.p):
            raise ValueError("p must be an odd prime")
        if self.n < 1:
            raise ValueError("n must be at least 1")
        scale = self.phi_scale
        if scale < 1 or scale > self.p**self.n:
            raise ValueError("phi_scale must be a power of p dividing p^n")
        while scale % self.p == 0:
            scale //= self.p
        if scale != 1:
            raise ValueError("phi_scale must be a power of p dividing p^n")

    @property
    def modulus(self) -> int:
        return self.p**self.n

    @property
    def required_order(self) -> int:
        return self.p**self.n // self.phi_scale


@dataclass(frozen=True)
class Witness:
    """Raw data behind the condition flags: the chosen square root of d
    mod q, the residue symbol of the fundamental unit, and the class
    coordinates of the prime above q (None where undefined)."""

    root: int | None
    symbol: arith.ResidueSymbol | None
    class_coords: tuple | None


@dataclass(frozen=True)
class PrimeCandidate:
    q: int
    p: int
    n: int
    cond1: bool
    cond2: bool
    cond3: bool
    cond4: bool
    cond5: bool
    cond6: bool
    witness: Witness
    target_class: tuple
    matched_inverse: bool
    phi_scale: int = 1
    cond3_note: str = _COND3_NOTE

    @property
    def passed(self) -> bool:
        return all(self.flags())

    def flags(self) -> tuple:
        return (self.cond1, self.cond2, self.cond3,
                self.cond4, self.cond5, self.cond6)


@dataclass(frozen=True)
class ExhaustedSearch:
    """No prime below q_bound qualified.  failures counts, for each
    condition, how many scanned candidates failed it (a candidate can
    fail several); cond1 counts primes skipped for dividing 2 p disc."""

    q_bound: int
    scanned: int
    failures: dict


def _normalize_class(cg, coords) -> tuple:
    coords = tuple(int(c) for c in coords)
    if len(coords) != len(cg.elementary_divisors):
        raise ValueError(
            f"class coordinates {coords} do not fit a group with divisors "
            f"{cg.elementary_divisors}"
        )
    return tuple(c % m for c, m in zip(coords, cg.elementary_divisors))


def check_conditions(
    L: QuadraticField,
    p: int,
    n: int,
    q: int,
    target_class,
    spec: LambdaSpec | None = None,
) -> PrimeCandidate:
    """Evaluate all six conditions at q and package the witnesses.

    q must not divide 2 p disc(L); such q are degenerate for condition
    (1) and rejected with an error, so every returned candidate has
    cond1 = True by construction.
    """
    if spec is None:
        spec = LambdaSpec(p, n)
    elif (spec.p, spec.n) != (p, n):
        raise ValueError("spec does not match p, n")
    if not arith.is_prime(q):
        raise ValueError(f"q = {q} is not prime")
    if (2 * p * L.disc) % q == 0:
        raise ValueError(
            f"q = {q} divides 2*p*disc(L): condition (1) is degenerate"
        )

    cg = class_group(L)
    target = _normalize_class(cg, target_class)
    pn = p**n

    cond1 = True
    cond2 = q % pn == 1
    cond3 = True  # see _COND3_NOTE
    cond4 = arith.kronecker(L.disc, q) == 1

    root = symbol = coords = None
    cond5 = cond6 = matched_inverse = False
    if cond4:
        root = arith.sqrt_mod(L.d % q, q)
        if cond2:
            # reduce eps by sending sqrt(d) to the chosen root
            omega_res = root if L.s == 0 else (1 + root) * pow(2, -1, q) % q
            eps_res = fundamental_unit(L).residue(omega_res, q)
            symbol = arith.power_residue_symbol(eps_res, q, pn)
            cond5 = symbol.order == spec.required_order
        coords = ideal_class_of(cg, prime_ideal_above(L, q))
        inverse = cg.inverse_coords(target)
        cond6 = coords in (target, inverse)
        matched_inverse = cond6 and coords == inverse and target != inverse

    if cond4 and cond5 and not (cond2 and cond3):
        raise ConsistencyError(
            f"conditions (4) and (5) hold at q = {q} but (2) and (3) do not"
        )

    return PrimeCandidate(
        q=q,
        p=p,
        n=n,
        cond1=cond1,
        cond2=cond2,
        cond3=cond3,
        cond4=cond4,
        cond5=cond5,
        cond6=cond6,
        witness=Witness(root=root, symbol=symbol, class_coords=coords),
        target_class=target,
        matched_inverse=matched_inverse,
        phi_scale=spec.phi_scale,
    )


def _require_p_sylow(cg, p, target_class) -> tuple:
    target = _normalize_class(cg, target_class)
    order = cg.order_of(target)
    reduced = order
    while reduced % p == 0:
        reduced //= p
    if reduced != 1:
        raise ValueError(
            f"target class {target} has order {order}, not a power of {p}"
        )
    return target


def find_prime(
    L: QuadraticField,
    p: int,
    n: int,
    target_class,
    spec: LambdaSpec | None = None,
    q_bound: int = DEFAULT_Q_BOUND,
    jobs: int = 1,
):
    """Smallest prime q <= q_bound passing all six conditions.

    Returns a PrimeCandidate, or an ExhaustedSearch value when the
    bound runs out.  With jobs > 1 the prime range is cut into blocks
    scanned by worker processes; the result is still the minimal
    qualifying prime because blocks are consumed in order.
    """
    if spec is None:
        spec = LambdaSpec(p, n)
    cg = class_group(L)
    target = _require_p_sylow(cg, p, target_class)

    primes = arith.sieve_primes(q_bound)
    if jobs > 1:
        return _find_prime_blocks(L, p, n, target, spec, q_bound, primes, jobs)

    stats = {name: 0 for name in _COND_NAMES}
    scanned = 0
    for q in primes:
        if (2 * p * L.disc) % q == 0:
            stats["cond1"] += 1
            continue
        scanned += 1
        cand = check_conditions(L, p, n, q, target, spec)
        if cand.passed:
            return cand
        for name, flag in zip(_COND_NAMES, cand.flags()):
            if not flag:
                stats[name] += 1
    return ExhaustedSearch(q_bound=q_bound, scanned=scanned, failures=stats)


def _scan_block(d, p, n, target, phi_scale, primes):
    """Worker body: scan one block of primes; returns the first hit (or
    None), the block's failure counts, and how many were scanned."""
    L = make_field(d)
    spec = LambdaSpec(p, n, phi_scale)
    stats = {name: 0 for name in _COND_NAMES}
    scanned = 0
    for q in primes:
        if (2 * p * L.disc) % q == 0:
            stats["cond1"] += 1
            continue
        scanned += 1
        cand = check_conditions(L, p, n, q, target, spec)
        if cand.passed:
            return cand, stats, scanned
        for name, flag in zip(_COND_NAMES, cand.flags()):
            if not flag:
                stats[name] += 1
    return None, stats, scanned


def _find_prime_blocks(L, p, n, target, spec, q_bound, primes, jobs):
    block = 4000
    blocks = [primes[i : i + block] for i in range(0, len(primes), block)]
    stats = {name: 0 for name in _COND_NAMES}
    scanned = 0
    with futures.ProcessPoolExecutor(max_workers=jobs) as pool:
        submitted = [
            pool.submit(_scan_block, L.d, p, n, target, spec.phi_scale, blk)
            for blk in blocks
        ]
        try:
            for fut in submitted:
                hit, block_stats, block_scanned = fut.result()
                scanned += block_scanned
                for name in _COND_NAMES:
                    stats[name] += block_stats[name]
                if hit is not None:
                    return hit
        finally:
            for fut in submitted:
                fut.cancel()
    return ExhaustedSearch(q_bound=q_bound, scanned=scanned, failures=stats)


@dataclass(frozen=True)
class AuxiliaryReduction:
    """Outcome of the auxiliary-prime reduction: the statement that the
    target class, pushed to the compositum L' of L with the degree-p^a
    field inside Q(mu_q), lands in the p^a-th powers of Cl_L'."""

    q: int
    p: int
    a: int
    degree: int
    split: bool
    congruence_ok: bool
    class_coords: tuple
    target_class: tuple
    matched_inverse: bool
    root: int
    statement: str


def find_auxiliary_prime(
    L: QuadraticField,
    p: int,
    a: int,
    target_class,
    q_bound: int = DEFAULT_Q_BOUND,
):
    """Smallest prime q <= q_bound that splits in L, has q = 1 mod
    2 p^a, and whose prime above carries the target class (or its
    inverse).  Returns an AuxiliaryReduction stating the consequence,
    or ExhaustedSearch."""
    if p == 2 or not arith.is_prime(p):
        raise ValueError("p must be an odd prime")
    if a < 1:
        raise ValueError("a must be at least 1")
    cg = class_group(L)
    target = _normalize_class(cg, target_class)
    inverse = cg.inverse_coords(target)
    pa = p**a
    modulus = 2 * pa

    stats = {"cond1": 0, "split": 0, "congruence": 0, "class": 0}
    scanned = 0
    for q in arith.sieve_primes(q_bound):
        if (2 * p * L.disc) % q == 0:
            stats["cond1"] += 1
            continue
        scanned += 1
        split = arith.kronecker(L.disc, q) == 1
        congruence = q % modulus == 1
        if not split:
            stats["split"] += 1
        if not congruence:
            stats["congruence"] += 1
        if not (split and congruence):
            continue
        coords = ideal_class_of(cg, prime_ideal_above(L, q))
        if coords not in (target, inverse):
            stats["class"] += 1
            continue
        statement = (
            f"c_L' = class(q')^{pa} lies in Cl_L'^{pa}; "
            f"L' = L * F_0 with F_0 in Q(mu_{q}) of degree {pa}, "
            f"totally ramified at q = {q}"
        )
        return AuxiliaryReduction(
            q=q,
            p=p,
            a=a,
            degree=pa,
            split=True,
            congruence_ok=True,
            class_coords=coords,
            target_class=target,
            matched_inverse=coords == inverse and target != inverse,
            root=arith.sqrt_mod(L.d % q, q),
            statement=statement,
        )
    return ExhaustedSearch(q_bound=q_bound, scanned=scanned, failures=stats)


def cyclic_quotient_exponent(divisors, C_order: int) -> bool:
    """Can a cyclic quotient of the group with the given elementary
    divisors contain an element of order C_order?  True exactly when
    C_order divides the group exponent (the lcm of the divisors)."""
    if C_order < 1:
        raise ValueError("C_order must be positive")
    if C_order > 1 and len(arith.factorize(C_order)) != 1:
        raise ValueError(f"C_order = {C_order} is not a prime power")
    exponent = 1
    for m in divisors:
        exponent = math.lcm(exponent, int(m))
    return exponent % C_order == 0
