"""Invariant suite run by ``gcsimplex verify``.

Every property compares the closed-form route against an independent one
(matrix traces, direct subtraction, finite differences, enumeration) over a
pool of domains. Each property draws from its own generator seeded from
``(seed, property index)`` so the report is reproducible byte for byte.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import descriptors as dsc
from .oracle import ensemble_for_weights, purity, trace_observable
from .scan import scan_rows
from .simplex import (
    REGION_CODES,
    DomainSpec,
    Region,
    SimplexPoint,
    classify,
    classify_array,
    mean_particle_number,
    weights_array,
    weights_from_omega_n,
    weights_from_reference,
)
from .species_io import SpeciesRecord, parse_catalog, to_domain, write_catalog

EPS = np.finfo(float).eps


@dataclass(frozen=True)
class PropertyResult:
    name: str
    passed: bool
    detail: str
    skipped: bool = False

    def line(self) -> str:
        status = "SKIP" if self.skipped else ("PASS" if self.passed else "FAIL")
        return f"{status} {self.name}: {self.detail}"


def synthetic_domains(count: int, rng: np.random.Generator, prefix: str = "synthetic") -> list[DomainSpec]:
    """Random domains satisfying ``I^q > |A^q|`` (so mu0 < 0 < eta0)."""
    out = []
    for k in range(count):
        n = int(rng.integers(1, 31))
        q = int(rng.integers(1, min(3, n) + 1))
        e_n = float(rng.uniform(-1000.0, -1.0))
        i_q = float(rng.uniform(0.5, 20.0))
        a_q = float(rng.uniform(-0.95, 0.95)) * i_q
        out.append(DomainSpec(f"{prefix}-{k:04d}", n, q, e_n, e_n - a_q, e_n + i_q))
    return out


def random_interior(rng: np.random.Generator, margin: float = 0.0) -> tuple[float, float]:
    """Point ``(x, w_zero)`` strictly inside the triangle, ``margin`` from its sides."""
    while True:
        x = float(rng.uniform(-1.0, 1.0))
        w = float(rng.uniform(0.0, 1.0)) * (1.0 - abs(x))
        if w > margin and 1.0 - abs(x) - w > margin and abs(x) > margin:
            return x, w


class Context:
    def __init__(self, domains: list[DomainSpec], seed: int, index: int):
        self.domains = domains
        self.rng = np.random.default_rng([seed, index])
        d = {dom.label: dsc.descriptor_set(dom, warn=False) for dom in domains}
        self.descriptors = d
        self.convex = [dom for dom in domains if d[dom.label].mu0 < 0 and d[dom.label].eta0 > 0]

    def pick(self, pool=None) -> DomainSpec:
        pool = self.domains if pool is None else pool
        return pool[int(self.rng.integers(len(pool)))]


def _skip(name: str, why: str) -> PropertyResult:
    return PropertyResult(name, True, why, skipped=True)


def check_normalization(ctx: Context, n_random: int = 100_000) -> tuple[bool, str]:
    xs = (2 * np.arange(2001) - 2000) / 2000
    ws = np.arange(1001) / 1000
    gx, gw = np.meshgrid(xs, ws)
    gx, gw = gx.ravel(), gw.ravel()
    inside = gw <= 1.0 - np.abs(gx) + 1e-12
    rx = ctx.rng.uniform(-1.0, 1.0, n_random)
    rw = ctx.rng.uniform(0.0, 1.0, n_random) * (1.0 - np.abs(rx))
    x = np.concatenate([gx[inside], rx])
    w = np.concatenate([gw[inside], rw])
    wm, w0, wp = weights_array(x, w)
    sum_err = float(np.max(np.abs(wm + w0 + wp - 1.0)))
    lo = float(min(wm.min(), wp.min(), w0.min()))
    hi = float(max(wm.max(), wp.max(), w0.max()))
    ok = sum_err <= 1e-12 and lo >= -1e-12 and hi <= 1.0 + 1e-12
    return ok, f"points={x.size} max_sum_err={sum_err:.3e} min={lo:.3e} max={hi:.17g}"


def _oracle_pairs(ctx: Context, n: int):
    for _ in range(n):
        dom = ctx.pick()
        x, w = random_interior(ctx.rng)
        dim = int(ctx.rng.integers(1, 6))
        yield dom, x, w, dim


def check_first_moment(ctx: Context, n: int = 10_000) -> tuple[bool, str]:
    worst = 0.0
    padded = 0
    for dom, x, w, dim in _oracle_pairs(ctx, n):
        wv = weights_from_omega_n(x, w)
        state, _, n_op = ensemble_for_weights(dom, wv, dim)
        target = dom.n_electrons + x * dom.q
        worst = max(worst, abs(trace_observable(state, n_op) - target),
                    abs(mean_particle_number(dom, wv) - target))
        padded += dim == 5
    return worst <= 1e-9, f"pairs={n} padded_to_5={padded} max_abs_err={worst:.3e}"


def check_energy_oracle(ctx: Context, n: int = 10_000) -> tuple[bool, str]:
    worst = 0.0
    for dom, x, w, dim in _oracle_pairs(ctx, n):
        wv = weights_from_omega_n(x, w)
        state, h, _ = ensemble_for_weights(dom, wv, dim)
        closed = dsc.energy(dom, wv)
        worst = max(worst, abs(trace_observable(state, h) - closed) / max(abs(closed), 1e-300))
    return worst <= 1e-9, f"pairs={n} max_rel_err={worst:.3e}"


def check_sector_dimension(ctx: Context, n: int = 1000) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(n):
        dom = ctx.pick()
        wv = weights_from_omega_n(*random_interior(ctx.rng))
        s1, h1, n1 = ensemble_for_weights(dom, wv, 1)
        s5, h5, n5 = ensemble_for_weights(dom, wv, 5)
        worst = max(worst,
                    abs(trace_observable(s1, h1) - trace_observable(s5, h5)),
                    abs(trace_observable(s1, n1) - trace_observable(s5, n5)))
    return worst <= 1e-12, f"cases={n} max_abs_diff={worst:.3e}"


def check_boundaries(ctx: Context) -> tuple[bool, str]:
    cases = {
        (0.0, 1.0): (0.0, 1.0, 0.0),
        (1.0, 0.0): (0.0, 0.0, 1.0),
        (-1.0, 0.0): (1.0, 0.0, 0.0),
    }
    bad = [k for k, v in cases.items() if weights_from_omega_n(*k).as_tuple() != v]
    for dom in ctx.domains:
        q = dom.q
        for nu0, expect in ((0.0, (0.0, 1.0, 0.0)), (q, (0.0, 0.0, 1.0)), (-q, (1.0, 0.0, 0.0))):
            if weights_from_reference(nu0, nu0, q).as_tuple() != expect:
                bad.append((dom.label, nu0))
    return not bad, "exact 0/1 at all three vertices" if not bad else f"mismatches={bad[:5]}"


def check_reference_agreement(ctx: Context, n: int = 1000) -> tuple[bool, str]:
    worst = 0.0
    for sign in (1.0, -1.0):
        for _ in range(n):
            q = int(ctx.rng.integers(1, 4))
            nu0 = sign * q * float(ctx.rng.uniform(0.0, 1.0))
            nu = nu0 * float(ctx.rng.uniform(0.0, 1.0))
            a = weights_from_reference(nu, nu0, q).as_tuple()
            b = weights_from_omega_n(nu / q, 1.0 - abs(nu0) / q).as_tuple()
            worst = max(worst, max(abs(u - v) for u, v in zip(a, b)))
    return worst <= 1e-12, f"pairs={2 * n} max_abs_diff={worst:.3e}"


def check_delta_h(ctx: Context, n: int = 10_000) -> tuple[bool, str]:
    if not ctx.convex:
        return None
    worst, negative, nonzero_edge = 0.0, 0, 0
    for _ in range(n):
        dom = ctx.pick(ctx.convex)
        x, w = random_interior(ctx.rng)
        q = dom.q
        nu0 = math.copysign(q * (1.0 - w), x)
        nu = x * q
        direct = dsc.delta_h(dom, nu, nu0)
        forms = (dsc.delta_h_affinity_form(dom, nu, nu0), dsc.delta_h_mu_form(dom, nu, nu0))
        worst = max(worst, *(abs(direct - f) for f in forms), abs(forms[0] - forms[1]))
        negative += direct < 0.0
        nonzero_edge += dsc.delta_h(dom, nu0, nu0) != 0.0
    ok = worst <= 1e-9 and negative == 0 and nonzero_edge == 0
    return ok, f"cases={n} max_abs_diff={worst:.3e} negative={negative} nonzero_at_edge={nonzero_edge}"


def check_trend(ctx: Context, lines: int = 100, samples: int = 21) -> tuple[bool, str]:
    if not ctx.convex:
        return None
    failures = 0
    for _ in range(lines):
        dom = ctx.pick(ctx.convex)
        w = float(ctx.rng.uniform(0.0, 0.99))
        e = dsc.energy_trend_check(dom, w, samples)
        if not all(a > b + 1e-12 for a, b in zip(e, e[1:])):
            failures += 1
    return failures == 0, f"lines={lines} samples={samples} non_decreasing={failures}"


def check_delta_u(ctx: Context, n: int = 10_000) -> tuple[bool, str]:
    if not ctx.convex:
        return None
    worst, positive = 0.0, 0
    for _ in range(n):
        dom = ctx.pick(ctx.convex)
        q = dom.q
        sign = 1.0 if ctx.rng.random() < 0.5 else -1.0
        a0, a1 = sorted(float(v) for v in ctx.rng.uniform(0.0, 1.0, 2))
        nu0, nu0p = sign * q * a1, sign * q * a0
        nu = sign * q * a0 * float(ctx.rng.uniform(0.0, 1.0))
        direct = dsc.delta_u(dom, nu, nu0, nu0p)
        worst = max(worst, abs(direct - dsc.delta_u_eta_form(dom, nu0, nu0p)))
        positive += direct > 0.0
    e_bar_bad = sum(
        1 for dom in ctx.domains
        if ctx.descriptors[dom.label].i_q > abs(ctx.descriptors[dom.label].a_q)
        and not ctx.descriptors[dom.label].e_bar > dom.e_neutral
    )
    ok = worst <= 1e-9 and positive == 0 and e_bar_bad == 0
    return ok, f"cases={n} max_abs_diff={worst:.3e} positive={positive} ebar_violations={e_bar_bad}"


def check_slopes(ctx: Context, n: int = 1000) -> tuple[bool, str]:
    worst = 0.0
    failures = 0
    for _ in range(n):
        dom = ctx.pick()
        q = dom.q
        x, w = random_interior(ctx.rng, margin=0.02)
        h = 1e-5 * q
        d_nu, d_nu0 = dsc.slope_checks(dom, SimplexPoint(x, w), h)
        d = ctx.descriptors[dom.label]
        expect = (d.mu0 / q, math.copysign(d.eta0, x) / q)
        # rounding floor of a central difference of energies of this magnitude
        floor = 64 * EPS * max(abs(e) for e in dom.sector_energies) / h
        for got, want in zip((d_nu, d_nu0), expect):
            err = abs(got - want)
            if err > 1e-6 * abs(want) + floor:
                failures += 1
            if want != 0.0:
                worst = max(worst, err / abs(want))
    return failures == 0, f"points={n} max_rel_err={worst:.3e} failures={failures}"


def check_purity(ctx: Context, n: int = 1000) -> tuple[bool, str]:
    dom = ctx.domains[0]
    vertex = [purity(ensemble_for_weights(dom, weights_from_omega_n(x, w))[0])
              for x, w in ((0.0, 1.0), (1.0, 0.0), (-1.0, 0.0))]
    vertex_err = max(abs(p - 1.0) for p in vertex)
    interior_max = 0.0
    for _ in range(n):
        dom = ctx.pick()
        wv = weights_from_omega_n(*random_interior(ctx.rng))
        interior_max = max(interior_max, purity(ensemble_for_weights(dom, wv, int(ctx.rng.integers(1, 6)))[0]))
    origin = purity(ensemble_for_weights(dom, weights_from_omega_n(0.0, 0.0))[0])
    ok = vertex_err <= 1e-12 and interior_max < 1.0 and origin == 0.5
    return ok, f"vertex_err={vertex_err:.3e} interior_max={interior_max:.6f} origin={origin!r}"


def check_classification(ctx: Context) -> tuple[bool, str]:
    """Totality on the 2001x1001 grid and agreement of the two classifiers."""
    xs = (2 * np.arange(2001) - 2000) / 2000
    ws = np.arange(1001) / 1000
    gx, gw = np.meshgrid(xs, ws)
    codes = classify_array(gx, gw)
    counts = np.bincount(codes.ravel(), minlength=len(REGION_CODES))
    total = int(counts.sum())
    plus = counts[REGION_CODES.index(Region.InteriorAcceptor)]
    minus = counts[REGION_CODES.index(Region.InteriorDonor)]
    frac_plus, frac_minus = plus / total, minus / total
    idx = ctx.rng.integers(0, gx.size, 5000)
    disagree = sum(
        1 for k in idx
        if REGION_CODES[codes.flat[k]] is not classify(SimplexPoint(float(gx.flat[k]), float(gw.flat[k])))
    )
    resolution = 2.0 / 1000
    ok = (total == gx.size and disagree == 0
          and abs(frac_plus - 0.25) <= resolution and abs(frac_minus - 0.25) <= resolution)
    return ok, f"points={total} frac_plus={frac_plus:.6f} frac_minus={frac_minus:.6f} disagree={disagree}"


def figure_counts(rows) -> Counter:
    return Counter(r.region for r in rows)


def figure_fractions(counts: Counter) -> tuple[int, int, int, float]:
    """Interior acceptor/donor counts, in-triangle count and acceptor fraction."""
    inside = sum(v for k, v in counts.items() if k is not Region.Outside)
    plus = counts[Region.InteriorAcceptor]
    minus = counts[Region.InteriorDonor]
    return plus, minus, inside, plus / inside


def check_figure(ctx: Context, grid: int = 400) -> tuple[bool, str]:
    dom = ctx.pick(ctx.convex or None)
    rows = scan_rows(dom, grid)
    counts = figure_counts(rows)
    plus, minus, inside, frac = figure_fractions(counts)
    boundary = inside - plus - minus
    mismatched = sum(1 for r in rows if classify(SimplexPoint(r.x, r.w_zero)) is not r.region)
    ok = plus == minus and abs(frac - 0.5) <= 0.01 * 0.5 and mismatched == 0
    return ok, (f"grid={grid} plus={plus} minus={minus} in_triangle={inside} "
                f"boundary={boundary} frac_plus={frac:.6f} mismatched={mismatched}")


_LABEL_CHARS = "abcXYZ019 _-.,\"'éßη中\U0001f600"


def random_records(rng: np.random.Generator, count: int) -> list[SpeciesRecord]:
    records = []
    for k in range(count):
        label = f"{k}:" + "".join(rng.choice(list(_LABEL_CHARS), int(rng.integers(0, 8))))
        n = int(rng.integers(1, 40))
        q = int(rng.integers(1, n + 1))
        e_n = float(rng.normal(0.0, 1.0) * 10.0 ** int(rng.integers(-3, 6)))
        if rng.random() < 0.5:
            records.append(SpeciesRecord.absolute(label, n, q, e_n, float(rng.normal(e_n, 5.0)),
                                                  e_n + float(rng.exponential(5.0))))
        else:
            records.append(SpeciesRecord.descriptor(label, n, q, e_n, float(rng.exponential(5.0)),
                                                    float(rng.normal(0.0, 3.0)), units="hartree"))
    return records


def check_roundtrip(ctx: Context, catalogs: int = 1000) -> tuple[bool, str]:
    failures = 0
    for _ in range(catalogs):
        records = random_records(ctx.rng, int(ctx.rng.integers(0, 6)))
        for fmt in ("json", "csv"):
            if parse_catalog(write_catalog(records, fmt), fmt) != records:
                failures += 1
    worst = 0.0
    for dom in ctx.domains:
        a = SpeciesRecord.absolute(dom.label, dom.n_electrons, dom.q, dom.e_neutral, dom.e_anion, dom.e_cation)
        d = ctx.descriptors[dom.label]
        b = SpeciesRecord.descriptor(dom.label, dom.n_electrons, dom.q, dom.e_neutral, d.i_q, d.a_q)
        da, db = to_domain(a), to_domain(b)
        for name in ("e_neutral", "e_anion", "e_cation"):
            u, v = getattr(da, name), getattr(db, name)
            worst = max(worst, abs(u - v) / max(1.0, abs(u)))
    ok = failures == 0 and worst <= 1e-12
    return ok, f"catalogs={catalogs} roundtrip_failures={failures} mode_max_rel_diff={worst:.3e}"


PROPERTIES: list[tuple[str, Callable]] = [
    ("normalization_bounds", check_normalization),
    ("first_moment_oracle", check_first_moment),
    ("energy_oracle", check_energy_oracle),
    ("sector_dimension_independence", check_sector_dimension),
    ("boundary_conditions", check_boundaries),
    ("reference_agreement", check_reference_agreement),
    ("delta_h", check_delta_h),
    ("trend_chain", check_trend),
    ("delta_u", check_delta_u),
    ("slopes", check_slopes),
    ("purity", check_purity),
    ("classification_grid", check_classification),
    ("figure_scan", check_figure),
    ("io_roundtrip", check_roundtrip),
]


def run_suite(domains: list[DomainSpec], seed: int) -> list[PropertyResult]:
    if not domains:
        raise ValueError("the verification suite needs at least one domain")
    results = []
    for index, (name, check) in enumerate(PROPERTIES):
        outcome = check(Context(domains, seed, index))
        if outcome is None:
            results.append(_skip(name, "no domain with mu0 < 0 < eta0 in the pool"))
        else:
            results.append(PropertyResult(name, *outcome))
    return results
