"""Command-line driver: search, certify, survey, classgroup, bound.

Human-readable output goes to stdout; structured records go to the
file named by --out, one JSON object per line, append-only.  Records
are self-contained: reverify_record rebuilds the field, the subfield,
the compositum and the extended ideal from the recorded parameters
and re-runs the exact certificate verifier with no other state.

Exit codes: 0 success, 1 search or enumeration exhausted
(inconclusive), 2 invalid input, 3 internal-consistency failure.
Options may also be supplied through environment variables prefixed
CAPITULA_ (flags take precedence), e.g. CAPITULA_CERTIFY_QBOUND.
"""

from __future__ import annotations

import json
import sys
import time
from concurrent import futures
from dataclasses import asdict

import click

from . import __version__
from .bounds import herbrand_report, required_n
from .chebotarev import (
    ExhaustedSearch,
    LambdaSpec,
    check_conditions,
    find_auxiliary_prime,
    find_prime,
)
from .compositum import (
    NotFound,
    PrincipalityCertificate,
    RadiusSchedule,
    build_compositum,
    certify_principal,
    extend_ideal,
    verify_certificate,
)
from .cyclotomic import make_subfield, poly_str, verify_subfield
from .errors import ConsistencyError
from .quadfield import class_group, is_principal, make_field, prime_ideal_above

DEFAULT_Q_BOUND = 10**6


# ---------------------------------------------------------------------------
# record plumbing


def _now_ms(t0: float) -> float:
    return round((time.perf_counter() - t0) * 1000, 1)


def _append_record(path: str | None, record: dict) -> None:
    if not path:
        return
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(json.dumps(record) + "\n")


def _structure_str(divisors) -> str:
    if not divisors:
        return "trivial"
    return " x ".join(f"Z/{m}" for m in divisors)


def _resolve_selector(cg, p: int, selector: str):
    """Map --class {generator, identity, explicit coords} to coordinates."""
    selector = selector.strip()
    if selector == "generator":
        syl = cg.p_sylow(p)
        if syl.order == 1:
            raise ValueError(
                f"class group of order {cg.order} has no {p}-torsion; "
                "no generator to target"
            )
        return syl.generator_coords
    if selector == "identity":
        return cg.identity_coords()
    try:
        return tuple(int(t) for t in selector.replace(",", " ").split())
    except ValueError:
        raise ValueError(f"cannot parse class selector {selector!r}") from None


def _candidate_payload(cand) -> dict:
    sym = cand.witness.symbol
    return {
        "q": cand.q,
        "condition_flags": list(cand.flags()),
        "witness": {
            "root": cand.witness.root,
            "symbol": None if sym is None else asdict(sym),
            "class_coords": None
            if cand.witness.class_coords is None
            else list(cand.witness.class_coords),
            "cond3_note": cand.cond3_note,
        },
        "target_class": list(cand.target_class),
        "matched_inverse": cand.matched_inverse,
        "phi_scale": cand.phi_scale,
    }


def _exhausted_payload(ex: ExhaustedSearch) -> dict:
    return {"q_bound": ex.q_bound, "scanned": ex.scanned, "failures": ex.failures}


def run_search(d, p, n, selector, q_bound, phi_scale, jobs):
    """Shared body of `search`: returns (record, found_candidate_or_None)."""
    timings = {}
    t0 = time.perf_counter()
    spec = LambdaSpec(p, n, phi_scale)
    L = make_field(d)
    cg = class_group(L)
    timings["classgroup"] = _now_ms(t0)
    target = _resolve_selector(cg, p, selector)

    t0 = time.perf_counter()
    result = find_prime(L, p, n, target, spec, q_bound, jobs)
    timings["search"] = _now_ms(t0)

    record = {
        "artifact_version": __version__,
        "command": "search",
        "d": d,
        "p": p,
        "n": n,
        "class_group": {
            "order": cg.order,
            "elementary_divisors": list(cg.elementary_divisors),
        },
        "config": {
            "class_selector": selector,
            "q_bound": q_bound,
            "phi_scale": phi_scale,
            "jobs": jobs,
        },
        "timings_ms": timings,
    }
    if isinstance(result, ExhaustedSearch):
        record["q"] = None
        record["exhausted"] = _exhausted_payload(result)
        return record, None
    record.update(_candidate_payload(result))
    return record, result


def run_certify(d, p, n, selector, q, q_bound, phi_scale, jobs, c0, max_doublings):
    """Shared body of `certify`: returns (record, status).

    status is "ok", "exhausted" (no qualifying prime), "failed"
    (explicit q given but some condition is false), or "not_found"
    (enumeration gave out).  Raises ValueError for invalid input and
    ConsistencyError if any internal cross-check trips.
    """
    timings = {}
    t0 = time.perf_counter()
    spec = LambdaSpec(p, n, phi_scale)
    L = make_field(d)
    cg = class_group(L)
    timings["classgroup"] = _now_ms(t0)
    target = _resolve_selector(cg, p, selector)

    syl = cg.p_sylow(p)
    report = herbrand_report(2, n, 0, 0, syl.w)
    need = required_n(syl.w, 0, 0)
    if not report.threshold_met:
        raise ValueError(
            f"n = {n} is below the principalization threshold: the {p}-part "
            f"has order {p}^{syl.w}, so n >= {need} is required"
        )

    record = {
        "artifact_version": __version__,
        "command": "certify",
        "d": d,
        "p": p,
        "n": n,
        "class_group": {
            "order": cg.order,
            "elementary_divisors": list(cg.elementary_divisors),
        },
        "bound_report": asdict(report),
        "config": {
            "class_selector": selector,
            "q": q,
            "q_bound": q_bound,
            "phi_scale": phi_scale,
            "jobs": jobs,
            "c0": c0,
            "max_doublings": max_doublings,
        },
        "timings_ms": timings,
    }

    t0 = time.perf_counter()
    if q is None:
        result = find_prime(L, p, n, target, spec, q_bound, jobs)
        if isinstance(result, ExhaustedSearch):
            timings["search"] = _now_ms(t0)
            record["q"] = None
            record["exhausted"] = _exhausted_payload(result)
            return record, "exhausted"
        cand = result
    else:
        cand = check_conditions(L, p, n, q, target, spec)
    timings["search"] = _now_ms(t0)
    record.update(_candidate_payload(cand))
    if not cand.passed:
        return record, "failed"

    t0 = time.perf_counter()
    F = make_subfield(cand.q, p**n)
    sub_report = verify_subfield(F)
    timings["subfield"] = _now_ms(t0)
    record["subfield"] = {
        "q": F.q,
        "e": F.e,
        "period_poly": list(F.period_poly),
        "disc": sub_report.disc,
        "poly_disc": sub_report.poly_disc,
        "index": sub_report.index,
        "real_roots": sub_report.real_roots,
        "irreducible_mod": sub_report.irreducible_mod,
    }

    t0 = time.perf_counter()
    order = build_compositum(L, F)
    ideal = prime_ideal_above(L, cand.q)
    lattice = extend_ideal(ideal, order)
    timings["compositum"] = _now_ms(t0)
    record["compositum_disc"] = order.disc
    record["ideal_hnf"] = [list(r) for r in lattice.hnf]
    record["ideal_norm"] = lattice.norm

    principal, _ = is_principal(L, ideal)
    record["principal_in_L"] = principal
    record["already_principal"] = principal

    t0 = time.perf_counter()
    outcome = certify_principal(
        lattice, order, RadiusSchedule(c0=c0, max_doublings=max_doublings)
    )
    timings["certify"] = _now_ms(t0)
    if isinstance(outcome, NotFound):
        record["certificate"] = None
        record["not_found"] = asdict(outcome)
        return record, "not_found"

    record["certificate"] = {
        "alpha": list(outcome.alpha),
        "norm_alpha": outcome.norm_alpha,
        "ideal_norm": outcome.ideal_norm,
        "containment": list(outcome.containment),
    }
    if not reverify_record(json.loads(json.dumps(record))):
        raise ConsistencyError("freshly emitted record failed re-verification")
    return record, "ok"


def reverify_record(record) -> bool:
    """Rebuild everything a certificate-bearing record references and
    re-run the exact verifier.  Needs nothing but the record."""
    cert = record.get("certificate")
    if not cert:
        return False
    L = make_field(record["d"])
    F = make_subfield(record["q"], record["p"] ** record["n"])
    order = build_compositum(L, F)
    lattice = extend_ideal(prime_ideal_above(L, record["q"]), order)
    if [list(r) for r in lattice.hnf] != record["ideal_hnf"]:
        return False
    if lattice.norm != record["ideal_norm"]:
        return False
    rebuilt = PrincipalityCertificate(
        alpha=tuple(cert["alpha"]),
        norm_alpha=cert["norm_alpha"],
        ideal_norm=cert["ideal_norm"],
        containment=tuple(cert["containment"]),
    )
    return verify_certificate(rebuilt, lattice, order)


def _survey_one(args):
    """Worker for survey fan-out; must stay module-level picklable."""
    d, p, n, q_bound, phi_scale, c0, max_doublings = args
    try:
        record, status = run_certify(
            d, p, n, "generator", None, q_bound, phi_scale, 1, c0, max_doublings
        )
        return d, record, status
    except ValueError as exc:
        return d, {"d": d, "error": str(exc)}, "invalid"


# ---------------------------------------------------------------------------
# commands


def _echo_candidate(cand_payload) -> None:
    flags = cand_payload["condition_flags"]
    names = ", ".join(
        f"({i + 1})" for i, ok in enumerate(flags) if not ok
    )
    if all(flags):
        click.echo(f"q = {cand_payload['q']}: conditions (1)-(6) all hold")
    else:
        click.echo(f"q = {cand_payload['q']}: failed {names}")
    w = cand_payload["witness"]
    if w["root"] is not None:
        click.echo(f"  square root of d mod q: {w['root']}")
    if w["symbol"] is not None:
        s = w["symbol"]
        click.echo(
            f"  unit symbol: base {s['base']}, value {s['value']}, "
            f"order {s['order']} (degree {s['degree']})"
        )
    if w["class_coords"] is not None:
        tag = "inverse of target" if cand_payload["matched_inverse"] else "target"
        click.echo(f"  class of prime above q: {w['class_coords']}  [{tag}]")


def _echo_exhausted(payload) -> None:
    click.echo(
        f"exhausted: no qualifying prime up to {payload['q_bound']} "
        f"({payload['scanned']} candidates)"
    )
    parts = ", ".join(f"{k}={v}" for k, v in payload["failures"].items())
    click.echo(f"  failure counts: {parts}")


@click.group(context_settings={"auto_envvar_prefix": "CAPITULA"})
@click.version_option(version=__version__)
def main():
    """Exact capitulation certificates for real quadratic ideal classes.

    Finds primes q whose real cyclotomic subfield of degree p^n makes a
    chosen ideal class of Q(sqrt(d)) principal, and proves it with an
    integer certificate that re-verifies from the record alone.
    """


@main.command()
@click.option("--d", type=int, required=True, help="Squarefree d >= 2.")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Append a JSON record to this file.")
def classgroup(d, out):
    """Class number and group structure of Q(sqrt(d))."""
    try:
        L = make_field(d)
        cg = class_group(L)
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    click.echo(
        f"d = {d}: h = {cg.order}, structure {_structure_str(cg.elementary_divisors)}"
    )
    _append_record(out, {
        "artifact_version": __version__,
        "command": "classgroup",
        "d": d,
        "h": cg.order,
        "elementary_divisors": list(cg.elementary_divisors),
    })


_search_options = [
    click.option("--d", type=int, required=True, help="Squarefree d >= 2."),
    click.option("--p", type=int, required=True, help="Odd prime p."),
    click.option("--n", type=click.IntRange(min=1), default=1, show_default=True,
                 help="Ramification exponent: F has degree p^n."),
    click.option("--class", "selector", default="generator", show_default=True,
                 help="Target class: generator, identity, or explicit "
                      "coordinates like '1' or '0,2'."),
    click.option("--qbound", type=int, default=DEFAULT_Q_BOUND, show_default=True,
                 help="Scan primes q up to this bound."),
    click.option("--phi-scale", type=int, default=1, show_default=True,
                 help="Power of p scaling the unit character."),
    click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True,
                 help="Worker processes for the prime scan."),
    click.option("--out", type=click.Path(dir_okay=False), default=None,
                 help="Append a JSON record to this file."),
]


def _with_options(opts):
    def wrap(fn):
        for opt in reversed(opts):
            fn = opt(fn)
        return fn
    return wrap


@main.command()
@_with_options(_search_options)
def search(d, p, n, selector, qbound, phi_scale, jobs, out):
    """Scan for the smallest prime q passing all six conditions."""
    try:
        record, cand = run_search(d, p, n, selector, qbound, phi_scale, jobs)
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    except ConsistencyError as exc:
        click.echo(f"internal consistency failure: {exc}", err=True)
        sys.exit(3)
    _append_record(out, record)
    cginfo = record["class_group"]
    click.echo(
        f"d = {d}, p = {p}, n = {n}: class group "
        f"{_structure_str(cginfo['elementary_divisors'])}, "
        f"target {record.get('target_class', record['config']['class_selector'])}"
    )
    if cand is None:
        _echo_exhausted(record["exhausted"])
        sys.exit(1)
    _echo_candidate(record)


@main.command()
@_with_options(_search_options)
@click.option("--q", type=int, default=None,
              help="Use this prime instead of scanning.")
@click.option("--c0", type=int, default=2, show_default=True,
              help="Initial enumeration radius multiplier.")
@click.option("--max-doublings", type=click.IntRange(min=0), default=12,
              show_default=True, help="Radius doublings before giving up.")
def certify(d, p, n, selector, qbound, phi_scale, jobs, out, q, c0, max_doublings):
    """End-to-end principalization: find q, build M = L.F, emit an
    exact certificate that the target class becomes principal."""
    try:
        record, status = run_certify(
            d, p, n, selector, q, qbound, phi_scale, jobs, c0, max_doublings
        )
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    except ConsistencyError as exc:
        click.echo(f"internal consistency failure: {exc}", err=True)
        sys.exit(3)
    _append_record(out, record)

    if status == "exhausted":
        _echo_exhausted(record["exhausted"])
        sys.exit(1)
    _echo_candidate(record)
    if status == "failed":
        click.echo("the supplied q does not satisfy the conditions")
        sys.exit(1)

    sub = record["subfield"]
    click.echo(
        f"subfield of Q(mu_{sub['q']}): degree {sub['e']}, "
        f"eta polynomial {poly_str(sub['period_poly'])}, disc {sub['disc']}"
    )
    click.echo(f"compositum discriminant: {record['compositum_disc']}")
    if record["already_principal"]:
        click.echo("note: class is already principal in L (degenerate run)")
    if status == "not_found":
        nf = record["not_found"]
        click.echo(
            f"no generator found up to T2 radius^2 = {nf['max_radius_sq']} "
            f"({nf['enumerated']} candidates tried); inconclusive"
        )
        sys.exit(1)
    cert = record["certificate"]
    click.echo(f"generator alpha = {cert['alpha']}")
    click.echo(
        f"N(alpha) = {cert['norm_alpha']}, ideal norm {cert['ideal_norm']}: "
        "certificate verified exactly"
    )
    if not record["principal_in_L"]:
        click.echo("negative control: the class is NOT principal in L itself")


@main.command()
@click.option("--dmin", type=int, default=2, show_default=True)
@click.option("--dmax", type=int, required=True)
@click.option("--p", type=int, required=True, help="Odd prime p.")
@click.option("--n", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--qbound", type=int, default=DEFAULT_Q_BOUND, show_default=True)
@click.option("--phi-scale", type=int, default=1, show_default=True)
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True,
              help="Fields certified in parallel.")
@click.option("--c0", type=int, default=2, show_default=True)
@click.option("--max-doublings", type=click.IntRange(min=0), default=12,
              show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def survey(dmin, dmax, p, n, qbound, phi_scale, jobs, c0, max_doublings, out):
    """Certify every squarefree d in [dmin, dmax] whose class number is
    divisible by p, and print a summary table."""
    try:
        LambdaSpec(p, n)  # validates p odd prime, n >= 1
        members = []
        for d in range(max(2, dmin), dmax + 1):
            try:
                L = make_field(d)
            except ValueError:
                continue
            if class_group(L).order % p == 0:
                members.append(d)
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)

    rows = []
    work = [(d, p, n, qbound, phi_scale, c0, max_doublings) for d in members]
    if jobs > 1 and len(work) > 1:
        with futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_survey_one, work))
    else:
        results = [_survey_one(w) for w in work]

    for d, record, status in results:
        _append_record(out, record)
        h = record.get("class_group", {}).get("order")
        qv = record.get("q")
        ms = sum(record.get("timings_ms", {}).values())
        rows.append((d, h, qv, status, ms))

    click.echo(f"{'d':>6} {'h':>4} {'q':>8} {'status':>10} {'ms':>9}")
    for d, h, qv, status, ms in rows:
        click.echo(
            f"{d:>6} {h if h is not None else '-':>4} "
            f"{qv if qv is not None else '-':>8} {status:>10} {ms:>9.1f}"
        )
    click.echo(
        f"{len(rows)} fields, "
        f"{sum(1 for r in rows if r[3] == 'ok')} certified"
    )


@main.command()
@click.option("--g-order", type=int, required=True, help="|G| = [L:K].")
@click.option("--n", type=int, required=True, help="Ramification exponent.")
@click.option("--delta", type=int, default=0, show_default=True)
@click.option("--d-exp", type=int, default=0, show_default=True)
@click.option("--w", type=int, required=True, help="p-part exponent of h.")
def bound(g_order, n, delta, d_exp, w):
    """Evaluate the cohomology-exponent bounds and the threshold."""
    try:
        report = herbrand_report(g_order, n, delta, d_exp, w)
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    click.echo(f"|G| = {report.G_order}, n = {report.n}, delta = {report.delta}, "
               f"d = {report.d_exp}, w = {report.w}")
    click.echo(f"H^0 exponent lower bound: {report.h0_exp}")
    click.echo(f"H^1 exponent lower bound: {report.h1_exp}")
    click.echo(f"invariant-ideal quotient bound exponent: {report.igpg_exp_bound}")
    click.echo(f"threshold n >= w + delta - d: "
               f"{'met' if report.threshold_met else 'NOT met'} "
               f"(required n = {required_n(report.w, report.delta, report.d_exp)})")


@main.command()
@click.option("--d", type=int, required=True, help="Squarefree d >= 2.")
@click.option("--p", type=int, required=True, help="Odd prime p.")
@click.option("--a", type=click.IntRange(min=1), default=1, show_default=True,
              help="Auxiliary degree exponent: F_0 has degree p^a.")
@click.option("--class", "selector", default="generator", show_default=True)
@click.option("--qbound", type=int, default=DEFAULT_Q_BOUND, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def auxiliary(d, p, a, selector, qbound, out):
    """Auxiliary-prime reduction: a split prime q = 1 (mod 2 p^a) whose
    class matches the target, with the resulting power statement."""
    try:
        L = make_field(d)
        cg = class_group(L)
        target = _resolve_selector(cg, p, selector)
        result = find_auxiliary_prime(L, p, a, target, qbound)
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    if isinstance(result, ExhaustedSearch):
        _echo_exhausted(_exhausted_payload(result))
        sys.exit(1)
    record = {
        "artifact_version": __version__,
        "command": "auxiliary",
        "d": d,
        "p": p,
        "a": a,
        "q": result.q,
        "class_coords": list(result.class_coords),
        "target_class": list(result.target_class),
        "matched_inverse": result.matched_inverse,
        "root": result.root,
        "statement": result.statement,
    }
    _append_record(out, record)
    click.echo(f"q = {result.q} (split, q = 1 mod {2 * p**a}), "
               f"class {result.class_coords}")
    click.echo(result.statement)


if __name__ == "__main__":
    main()
