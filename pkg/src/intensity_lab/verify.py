"""The verification battery behind ``verify-thesis`` and the acceptance tests.

Each check returns ``(ok, expected, computed)``; the runner adds timing,
a wall-clock budget and PASS / FAIL / SKIPPED(budget) status.
"""
from __future__ import annotations

import signal
import threading
import time
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import constructions as C
from . import groups as GR
from . import intensity as I
from . import kappa as K
from . import structure as S
from .rings import CoefficientRing, QuaternionAlgebra


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class Check:
    cid: str
    module: str
    title: str
    citation: str
    budget: float          # seconds
    fn: object
    stretch: bool = False


@dataclass
class Outcome:
    check: Check
    status: str            # PASS | FAIL | SKIPPED(budget) | ERROR
    expected: object
    computed: object
    seconds: float

    def row(self):
        return {"id": self.check.cid, "module": self.check.module, "title": self.check.title,
                "status": self.status, "expected": self.expected, "computed": self.computed,
                "citation": self.check.citation, "seconds": round(self.seconds, 2)}


# --- shared group instances ------------------------------------------------------

@lru_cache(maxsize=None)
def yo():
    return C.build_yo()


@lru_cache(maxsize=None)
def yo_quotient(i):
    Y = yo()
    return GR.quotient(Y, S.series(Y).term(i))


@lru_cache(maxsize=None)
def sn(M, k=None, t=None):
    return C.build_sn_delta(5, t, M, k)


@lru_cache(maxsize=None)
def sl2(M, k=None):
    return C.build_sl2_triangle(5, M, k)


@lru_cache(maxsize=None)
def small(name):
    table = {
        "trivial": C.trivial_group,
        "Z9xZ3": lambda: C.build_abelian(3, [2, 1]),
        "Z25": lambda: C.build_abelian(5, [2]),
        "Z3xZ3": lambda: C.build_abelian(3, [1, 1]),
        "Z5xZ5": lambda: C.build_abelian(5, [1, 1]),
        "D8": C.build_dihedral8,
        "E27": lambda: C.build_extraspecial(3, 1, "p"),
        "E27b": lambda: C.build_extraspecial(3, 1, "p2"),
        "E125": lambda: C.build_extraspecial(5, 1, "p"),
        "E125b": lambda: C.build_extraspecial(5, 1, "p2"),
        "E243": lambda: C.build_extraspecial(3, 2, "p"),
    }
    return table[name]()


# --- acceptance criteria ---------------------------------------------------------------

def crit_yo_invariants():
    Y = yo()
    ser = S.series(Y)
    Z = GR.center(Y)
    G2 = ser.term(2)
    computed = {
        "order": Y.n, "class": ser.nilpotency_class, "widths": ser.widths,
        "centre_is_G4": Z == ser.term(4), "centre_order": len(Z),
        "G2_elementary_abelian": S.is_elementary_abelian(Y, G2), "G2_order": len(G2),
        "kappa": S.is_kappa_group(Y), "regular": S.is_regular(Y),
    }
    expected = {"order": 729, "class": 4, "widths": [2, 1, 2, 1], "centre_is_G4": True,
                "centre_order": 3, "G2_elementary_abelian": True, "G2_order": 81,
                "kappa": True, "regular": False}
    return computed == expected, expected, computed


def crit_yo_intensity():
    Y = yo()
    rep = I.intensity(Y)
    a = I.alpha_yo(Y)
    wit = I.automorphism_from_generator_images(Y, rep.witnesses[2], gens=rep.generators)
    computed = {"intensity": rep.intensity, "alpha_intense": I.is_intense(Y, a),
                "alpha_scalar": a.scalar, "alpha_order": a.order(),
                "witness_intense": I.is_intense(Y, wit),
                "minus_one_powers": I.minus_one_powers_check(Y, a)}
    expected = {"intensity": 2, "alpha_intense": True, "alpha_scalar": 2, "alpha_order": 2,
                "witness_intense": True, "minus_one_powers": True}
    return computed == expected, expected, computed


def crit_abelian_battery():
    expected = {"Z9xZ3": 2, "Z25": 4, "D8": 1, "trivial": 1}
    computed = {k: I.intensity(small(k)).intensity for k in expected}
    return computed == expected, expected, computed


def crit_extraspecial_battery():
    expected = {"E27 exp 3": 2, "E125 exp 5": 4, "E125 exp 25": 1}
    names = {"E27 exp 3": "E27", "E125 exp 5": "E125", "E125 exp 25": "E125b"}
    computed = {k: I.intensity(small(v)).intensity for k, v in names.items()}
    return computed == expected, expected, computed


def crit_class3():
    Q = yo_quotient(4)
    computed = {"order": Q.n, "intensity": I.intensity(Q).intensity}
    expected = {"order": 243, "intensity": 2}
    return computed == expected, expected, computed


def crit_kappa():
    checks = K.certificate()["checks"]
    expected = {"I_V": 3, "K_V": 3, "Lambda": 3, "s_V_bijective": True, "l_V_bijective": True,
                "sigma_equals_l_after_s": True, "x5_present": True, "all_x5_plus_bx": True,
                "b_condition": True, "kappa_odd": True}
    return checks == expected, expected, checks


def _framed_vs_lines(G):
    framed = S.framed_report(G)
    lines = S.lines_report(G)
    return framed, lines, framed == lines


def crit_sn_tower():
    G = sn(2)
    ser = S.series(G)
    computed = {"order_M2": G.n, "widths_M2": ser.widths}
    rows = {}
    for M, k in ((2, 3), (2, None), (3, 5)):
        Q = sn(M, k)
        cls = S.series(Q).nilpotency_class
        row = {"order": Q.n, "obelisk": S.is_obelisk(Q), "framed": S.is_framed(Q),
               "maximal_subgroups": len(S.maximal_subgroups(Q))}
        if cls >= 3:
            framed, lines, agree = _framed_vs_lines(Q)
            row["lines_agree_with_phi"] = agree
            row["lines_criterion"] = all(lines.values())
        rows[f"class{cls}"] = row
    computed["quotients"] = rows
    expected = {"order_M2": 3125, "widths_M2": [2, 1, 2], "quotients": {
        "class2": {"order": 125, "obelisk": True, "framed": True, "maximal_subgroups": 6},
        "class3": {"order": 3125, "obelisk": True, "framed": True, "maximal_subgroups": 6,
                   "lines_agree_with_phi": True, "lines_criterion": True},
        "class4": {"order": 15625, "obelisk": True, "framed": True, "maximal_subgroups": 6,
                   "lines_agree_with_phi": True, "lines_criterion": True}}}
    return computed == expected, expected, computed


def _line_of(G, x):
    """Sorted coset-rep set of <x G_2> in G/G_2, for comparing lines."""
    G2 = S.series(G).term(2)
    span = GR.subgroup_generated(G, [x] + list(G2.gens))
    return span


def crit_sl2_contrast():
    G = sl2(3)
    q = 5 ** 3
    computed = {"order": G.n, "filter_count": C.sl2_filter_count(5, 3),
                "members_ok": all(C.sl2_member(x, 5, q) for x in G.elements)}
    expected = {"order": 5 ** 7, "filter_count": 5 ** 7, "members_ok": True}
    rows, exp_rows, failing_counts = {}, {}, {}
    for k in (4, 5, None):
        Q = sl2(3, k) if k else G
        cls = S.series(Q).nilpotency_class
        framed, lines, agree = _framed_vs_lines(Q)
        b_line = _line_of(Q, Q.generators[0])
        failing = [x for x, ok in lines.items() if not ok]
        rows[f"class{cls}"] = {
            "obelisk": S.is_obelisk(Q), "framed": all(framed.values()),
            "lines_agree_with_phi": agree,
            "B1_line_fails": any(_line_of(Q, x) == b_line for x in failing),
        }
        exp_rows[f"class{cls}"] = {"obelisk": True, "framed": False,
                                   "lines_agree_with_phi": True, "B1_line_fails": True}
        failing_counts[f"class{cls}"] = len(failing)
    computed["quotients"] = rows
    expected["quotients"] = exp_rows
    ok = computed == expected
    # informational: which lines fail (not part of the comparison)
    computed["failing_line_counts"] = failing_counts
    return ok, expected, computed


def _cyclic_jumps_fast(G):
    """Cyclic-subgroup jump check visiting each cyclic subgroup once."""
    ser = S.series(G)
    depth = ser.depth
    p = G.p
    done = np.zeros(G.n, dtype=bool)
    done[0] = True
    for x in range(1, G.n):
        if done[x]:
            continue
        powers = [x]
        y = G.mul(x, x)
        while y != 0:
            powers.append(y)
            y = G.mul(y, x)
        n = len(powers) + 1
        for e, z in enumerate(powers, start=1):
            if np.gcd(e, n) == 1:
                done[z] = True
        # jumps: depths of x^{p^k}
        jumps = []
        k = 1
        while k < n:
            jumps.append(int(depth[powers[k - 1]]))
            k *= p
        H = GR.Subgroup(np.sort(np.array([0] + powers)), [x])
        prof = S.jump_profile(G, H)
        if any(w != 1 for _, w in prof.jumps) or len({j % 2 for j in prof.jump_indices}) > 1:
            return False
        if sorted(prof.jump_indices) != sorted(jumps):
            return False
    return True


def crit_properties():
    Y = yo()
    out = {}
    out["cubing_Y/Y4"] = S.cubing_identity_holds(yo_quotient(4))
    upto = [Y, yo_quotient(4), yo_quotient(3), small("E27"), small("E27b"), small("E125"),
            small("E125b"), small("E243"), small("Z9xZ3"), sn(2, 3)]
    out["p_power_congruence"] = all(S.p_power_congruence_holds(G) for G in upto if G.n <= 3 ** 6)
    out["power_abelian_Sn/G5"] = S.power_abelian_report(sn(3, 5))["holds"]
    out["normal_squeeze_Y"] = S.normal_squeeze_holds(Y)
    out["cyclic_jumps_Sn/G5"] = _cyclic_jumps_fast(sn(3, 5))
    a = I.alpha_yo(Y)
    plus, minus = S.plus_minus_decomposition(Y, a)
    pred_plus, pred_minus = S.plus_minus_jump_orders(Y, a)
    out["plus_minus"] = (len(plus) * len(minus) == Y.n and len(plus) == pred_plus == 9
                         and len(minus) == pred_minus == 81)
    oracle = {}
    for name in ("trivial", "Z9xZ3", "Z25", "Z3xZ3", "Z5xZ5", "D8", "E27", "E27b"):
        G = small(name)
        oracle[name] = I.intensity(G).intensity == I.brute_force_intensity(G)
    Q3 = yo_quotient(3)
    oracle["Y/Y3"] = I.intensity(Q3).intensity == I.brute_force_intensity(Q3)
    out["oracle_equivalence"] = all(oracle.values())
    expected = {k: True for k in out}
    return out == expected, expected, out


def crit_stretch():
    G = sn(3, 4)
    r = I.intensity(G)
    computed = {"order": G.n, "intensity": r.intensity}
    expected = {"order": 3125, "intensity": 2}
    return computed == expected, expected, computed


# --- module-level extras -------------------------------------------------------------

def chk_ring_axioms():
    rings = [CoefficientRing.zmod(p, m) for p in (2, 3, 5, 7) for m in (1, 2, 3) if p ** m <= 81]
    rings.append(CoefficientRing.dual(3))
    ok = True
    for R in rings:
        A, M, N = R.add_table, R.mul_table, R.neg_table
        n = R.size
        x = np.arange(n)
        ok &= bool((A[x, N[x]] == 0).all() and (M[1] == x).all())
        xs, ys, zs = np.meshgrid(x, x, x, indexing="ij")
        ok &= bool((A[A[xs, ys], zs] == A[xs, A[ys, zs]]).all())
        ok &= bool((M[M[xs, ys], zs] == M[xs, M[ys, zs]]).all())
        ok &= bool((M[xs, A[ys, zs]] == A[M[xs, ys], M[xs, zs]]).all())
        ok &= bool((M == M.T).all() and (A == A.T).all())
    return ok, True, ok


def chk_bar_antiautomorphism():
    alg = QuaternionAlgebra.yo()
    X = alg.all_elements_array()
    enc = alg.encode_arrays
    ok = True
    for start in range(0, len(X), 729):
        xs = X[start:start + 729]
        xx = np.repeat(xs, len(X), axis=0)
        yy = np.tile(X, (len(xs), 1))
        lhs = alg.bar_arrays(alg.mul_arrays(xx, yy))
        rhs = alg.mul_arrays(alg.bar_arrays(yy), alg.bar_arrays(xx))
        ok &= bool((enc(lhs) == enc(rhs)).all())
    ok &= bool((enc(alg.bar_arrays(alg.bar_arrays(X))) == enc(X)).all())
    return ok, True, ok


def chk_layers():
    alg = QuaternionAlgebra.delta(5, 2, 2)
    X = alg.all_elements_array()
    vals = np.array([alg.valuation(tuple(r)) for r in X], dtype=float)
    sizes = []
    for k in range(1, 4):
        sizes.append(int(((vals >= k).sum()) // ((vals >= k + 1).sum())))
    return sizes == [25, 25, 25], [25, 25, 25], sizes


def chk_yo_subgroups():
    Y = yo()
    classes = GR.subgroup_conjugacy_classes(Y)
    sizes = sorted({len(c) for c in classes})
    return set(sizes) <= {1, 3, 9, 27}, "{1,3,9,27}", sizes


def chk_t_invariance():
    rows = {}
    for t in (2, 3):
        G = C.build_sn_delta(5, t, 2)
        Q = C.build_sn_delta(5, t, 3, 3)
        rows[t] = {"order": G.n, "widths": S.series(G).widths, "framed": S.is_framed(G),
                   "obelisk": S.is_obelisk(G), "intensity_G/G3": I.intensity(Q).intensity}
    return rows[2] == rows[3], rows[2], rows[3]


CHECKS = [
    Check("1", "structure_analysis", "Y invariants", "729-element norm-one group: class 4, "
          "widths 2,1,2,1, centre G_4, G_2 elementary abelian, kappa, not regular", 10, crit_yo_invariants),
    Check("2", "intensity_engine", "intensity(Y) = 2", "Y has intensity 2 via the intense "
          "involution acting as (-1)^i on layers", 300, crit_yo_intensity),
    Check("3", "intensity_engine", "abelian / 2-group battery", "abelian intensity p-1; "
          "2-groups intensity 1", 30, crit_abelian_battery),
    Check("4", "intensity_engine", "extraspecial battery", "class 2: intensity > 1 iff "
          "extraspecial of exponent p", 180, crit_extraspecial_battery),
    Check("5", "intensity_engine", "intensity(Y/Y4) = 2", "class 3: intensity 2 iff "
          "|G:G_2| = p^2", 60, crit_class3),
    Check("6", "kappa_structures", "kappa-structure certificate", "|I_V| = |K_V| = |Lambda| = 3; "
          "s_V, l_V bijective; Lambda = {x^5 + bx}", 10, crit_kappa),
    Check("7", "constructions", "Sn(D5) tower", "finite quotients of the norm-one group are "
          "framed obelisks; lines criterion", 300, crit_sn_tower),
    Check("8", "constructions", "SL2 contrast", "unitriangular SL2 quotients are obelisks but "
          "not framed (line of B(1))", 300, crit_sl2_contrast),
    Check("9", "structure_analysis", "property suites", "cubing formula, p-power congruence, "
          "power-abelian identities, normal squeeze, cyclic jumps, +/- cardinalities, oracle",
          300, crit_properties),
    Check("10", "intensity_engine", "STRETCH intensity(Sn(D5)/G4) = 2", "class 3 with "
          "|G:G_2| = p^2 has intensity 2", 1800, crit_stretch, stretch=True),
    Check("ring-1", "ring_algebra", "ring axioms, all rings of size <= 81", "ring axioms", 60,
          chk_ring_axioms),
    Check("ring-2", "ring_algebra", "bar is an anti-involution of the 6561-element algebra",
          "bar(xy) = bar(y) bar(x)", 120, chk_bar_antiautomorphism),
    Check("ring-3", "ring_algebra", "m^k / m^(k+1) has p^2 elements", "graded pieces are "
          "2-dimensional", 60, chk_layers),
    Check("core-1", "group_core", "conjugacy class sizes in Y", "subgroups of Y have 1, 3, 9 "
          "or 27 conjugates", 60, chk_yo_subgroups),
    Check("cons-1", "constructions", "independence of t", "isomorphism type independent of "
          "the non-residue t", 120, chk_t_invariance),
]

MODULE_ALIASES = {"kappa": "kappa_structures", "rings": "ring_algebra", "core": "group_core",
                  "structure": "structure_analysis", "intensity": "intensity_engine"}


def select(only=None, acceptance_only=False):
    mod = MODULE_ALIASES.get(only, only)
    out = [c for c in CHECKS if (mod is None or c.module == mod)]
    if acceptance_only:
        out = [c for c in out if c.cid.isdigit()]
    return out


def _run_with_timeout(fn, seconds):
    use_alarm = (threading.current_thread() is threading.main_thread()
                 and hasattr(signal, "setitimer"))
    if not use_alarm:
        return fn()

    def handler(signum, frame):
        raise BudgetExceeded()

    old = signal.signal(signal.SIGALRM, handler)
    signal.setitimer(signal.ITIMER_REAL, max(seconds, 1e-3))
    try:
        return fn()
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, old)


def run_check(check, budget_scale=1.0, deadline=None):
    t0 = time.perf_counter()
    budget = check.budget * budget_scale
    if deadline is not None:
        budget = min(budget, deadline - time.monotonic())
    if budget <= 0:
        return Outcome(check, "SKIPPED(budget)", None, None, 0.0)
    try:
        ok, expected, computed = _run_with_timeout(check.fn, budget)
        status = "PASS" if ok else "FAIL"
    except BudgetExceeded:
        return Outcome(check, "SKIPPED(budget)", None, None, time.perf_counter() - t0)
    except Exception as exc:  # noqa: BLE001 - one failing check must not abort siblings
        return Outcome(check, "ERROR", None, f"{type(exc).__name__}: {exc}", time.perf_counter() - t0)
    return Outcome(check, status, expected, computed, time.perf_counter() - t0)


def run(checks, budget_minutes=None):
    deadline = None if budget_minutes is None else time.monotonic() + 60 * budget_minutes
    return [run_check(c, deadline=deadline) for c in checks]


def exit_status(outcomes, strict=False):
    """0 all good; 2 a check failed; 3 a required check ran out of budget."""
    if any(o.status in ("FAIL", "ERROR") for o in outcomes):
        return 2
    skipped = [o for o in outcomes if o.status.startswith("SKIPPED")]
    if strict and skipped:
        return 3
    if any(not o.check.stretch for o in skipped):
        return 3
    return 0


def format_table(outcomes):
    lines = [f"{'id':<7} {'status':<16} {'secs':>8}  title"]
    for o in outcomes:
        lines.append(f"{o.check.cid:<7} {o.status:<16} {o.seconds:>8.2f}  {o.check.title}")
        lines.append(f"{'':<7} citation: {o.check.citation}")
        if o.status != "PASS":
            lines.append(f"{'':<7} expected: {o.expected}")
            lines.append(f"{'':<7} computed: {o.computed}")
    return "\n".join(lines)
