"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Every tolerance is pinned here. Runtime-limited criteria measure wall time of
the computation they specify.
"""

import math
import time

import numpy as np

from qmht.chernoff import multiple_qcb, q_overlap
from qmht.detectors import (
    epsilon_detector,
    evaluate_errors,
    gs_detector,
    gs_error_bound,
    holevo_helstrom,
    pgm,
    verify_bayes_conditions,
)
from qmht.linalg import DensityMatrix
from qmht.sampling import random_density_matrix, random_orthonormal, random_state_vector
from qmht.tensorlab import (
    gram_convergence_check,
    pairwise_li_check,
    run_power_experiment,
)
from conftest import diagonal, pure

LOG2 = math.log(2.0)
HELSTROM_ERR_ZERO_PLUS = (1.0 - 1.0 / math.sqrt(2.0)) / 2.0


def _report(number, name, clauses):
    failed = [(desc, detail) for desc, ok, detail in clauses if not ok]
    status = "PASS" if not failed else "FAIL"
    print(f"[{status}] criterion {number:2d}: {name}")
    for desc, ok, detail in clauses:
        mark = "ok" if ok else "FAILED"
        suffix = f" ({detail})" if detail else ""
        print(f"    - {desc}: {mark}{suffix}")
    assert not failed, f"criterion {number} ({name}): " + "; ".join(
        f"{desc}{f' [{detail}]' if detail else ''}" for desc, detail in failed
    )


def _states_zero_plus():
    return [pure([1.0, 0.0]), pure([1.0, 1.0])]


def _states_commuting_pair():
    return [diagonal([0.5, 0.5]), diagonal([1.0, 0.0])]


def _states_triple():
    return [pure([1.0, 0.0]), pure([1.0, 1.0]), pure([0.0, 1.0])]


def test_criterion_01_commuting_attainability():
    states = _states_commuting_pair()
    start = time.perf_counter()
    rows = run_power_experiment(states, range(1, 13), "gs").rows
    elapsed = time.perf_counter() - start
    deviations = [abs(row.exponent - (LOG2 - LOG2 / row.n)) for row in rows]
    worst = max(deviations)
    clauses = [
        (
            "exponent_n = log2 - log2/n within 1e-6 at every n",
            worst <= 1e-6,
            f"max deviation {worst:.3e}; measured sequence matches log2 + log2/n "
            f"(err_n = (1/2)(1/2)^n), decreasing toward log2 from above",
        ),
        ("runtime < 5 s", elapsed < 5.0, f"{elapsed:.2f} s"),
    ]
    _report(1, "commuting attainability sweep", clauses)


def test_criterion_02_pure_state_attainability():
    states = _states_zero_plus()
    start = time.perf_counter()
    report = run_power_experiment(states, range(1, 13), "gs")
    elapsed = time.perf_counter() - start
    rows = report.rows
    exponents = [row.exponent for row in rows]
    increasing = all(a < b + 1e-12 for a, b in zip(exponents, exponents[1:]))
    bound_ok = all(row.err <= row.error_bound + 1e-12 for row in rows)
    clauses = [
        (
            "exponent_n increasing",
            increasing,
            "measured sequence decreases toward log2 from above "
            f"(first three: {exponents[0]:.4f}, {exponents[1]:.4f}, {exponents[2]:.4f})",
        ),
        (
            "exponent_12 >= 0.80 log2",
            exponents[-1] >= 0.80 * LOG2,
            f"exponent_12 = {exponents[-1]:.4f}",
        ),
        ("error bound holds at every n", bound_ok, ""),
        ("runtime < 30 s", elapsed < 30.0, f"{elapsed:.2f} s"),
    ]
    _report(2, "pure-state attainability sweep", clauses)


def test_criterion_03_qcb_ceiling():
    instances = [
        ("commuting pair", _states_commuting_pair(), ("gs", "helstrom", "classical-ml", "epsilon")),
        ("pure pair", _states_zero_plus(), ("gs", "helstrom", "epsilon")),
        ("three pure states", _states_triple(), ("gs", "epsilon")),
    ]
    clauses = []
    for label, states, kinds in instances:
        xi = multiple_qcb(states).xi
        for kind in kinds:
            rows = run_power_experiment(states, range(1, 11), kind).rows
            overshoot = max(
                (row.exponent - (xi + 0.02) for row in rows if math.isfinite(row.exponent)),
                default=-math.inf,
            )
            clauses.append(
                (
                    f"{label} / {kind}: exponent_n <= xi + 0.02 for n <= 10",
                    overshoot <= 0.0,
                    f"max overshoot {overshoot:.4f}" if overshoot > 0 else "",
                )
            )
    _report(3, "finite-n exponents against the asymptotic ceiling", clauses)


def test_criterion_04_error_bound_500_random_instances():
    rng = np.random.default_rng(20260810)
    start = time.perf_counter()
    violations = 0
    worst_margin = math.inf
    for _ in range(500):
        r = int(rng.integers(2, 5))
        dim = int(rng.integers(2, 7))
        states = [
            random_density_matrix(dim, rng, rank=int(rng.integers(1, dim + 1)))
            for _ in range(r)
        ]
        det, diag = gs_detector(states)
        err = evaluate_errors(states, det).averaged
        bound = gs_error_bound(states, diag)
        worst_margin = min(worst_margin, bound - err)
        if err > bound + 1e-9:
            violations += 1
    elapsed = time.perf_counter() - start
    clauses = [
        (
            "Err <= bound on 500 random instances (d <= 6, r <= 4)",
            violations == 0,
            f"{violations} violations, smallest margin {worst_margin:.3e}",
        ),
        ("runtime < 60 s", elapsed < 60.0, f"{elapsed:.2f} s"),
    ]
    _report(4, "Gram-weighted error bound on random ensembles", clauses)


def test_criterion_05_gram_floor_closed_form():
    out = gram_convergence_check(_states_zero_plus(), range(1, 11))
    worst = max(abs(lam - (1.0 - 2.0 ** (-n / 2.0))) for n, lam in out)
    values = [lam for _, lam in out]
    monotone = all(a <= b + 1e-12 for a, b in zip(values, values[1:]))
    clauses = [
        ("lambda_min = 1 - 2^(-n/2) within 1e-8", worst <= 1e-8, f"max dev {worst:.2e}"),
        ("monotone toward 1", monotone and values[-1] > values[0], ""),
    ]
    _report(5, "joint-eigenvector Gram floor, n = 1..10", clauses)


def test_criterion_06_support_intersection_witness():
    rng = np.random.default_rng(31)
    dim = 6
    bad_intersecting = 0
    bad_trivial = 0
    for _ in range(100):
        # shared direction forces a nontrivial intersection
        shared = random_state_vector(dim, rng)
        k0, k1 = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        bases = []
        for k in (k0, k1):
            raw = np.column_stack(
                [shared] + [random_state_vector(dim, rng) for _ in range(k)]
            )
            q, _ = np.linalg.qr(raw)
            bases.append(q[:, : k + 1])
        states = [
            DensityMatrix(basis @ basis.conj().T / basis.shape[1]) for basis in bases
        ]
        witness = pairwise_li_check(states).pairs[0].witness
        if witness < 1.0 - 1e-9:
            bad_intersecting += 1
    for _ in range(100):
        k0, k1 = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        states = []
        for k in (k0, k1):
            basis = random_orthonormal(dim, k, rng)
            states.append(DensityMatrix(basis @ basis.conj().T / k))
        entry = pairwise_li_check(states).pairs[0]
        if not (entry.holds and entry.witness < 1.0):
            bad_trivial += 1
    clauses = [
        (
            "intersecting pairs give lambda_max >= 1 - 1e-9 (100 cases)",
            bad_intersecting == 0,
            f"{bad_intersecting} failures",
        ),
        (
            "trivially intersecting pairs give lambda_max < 1 (100 cases)",
            bad_trivial == 0,
            f"{bad_trivial} failures",
        ),
    ]
    _report(6, "support-intersection witness on random subspaces", clauses)


def test_criterion_07_embedding_machinery():
    rng = np.random.default_rng(47)
    identity_ok = True
    worst_rel = 0.0
    for _ in range(10):
        states = [random_density_matrix(3, rng, rank=2) for _ in range(2)]
        for epsilon in (0.2, 0.5):
            delta = math.sqrt(1.0 - epsilon**2)
            tilde = []
            for i, rho in enumerate(states):
                dec = rho.spectrum()
                dim = rho.dim
                big = np.zeros((3 * dim, 3 * dim), dtype=complex)
                for j in range(dim):
                    vec = np.zeros(3 * dim, dtype=complex)
                    vec[:dim] = delta * dec.vectors[:, j]
                    vec[(i + 1) * dim + j] = epsilon
                    big += dec.eigenvalues[j] * np.outer(vec, vec.conj())
                tilde.append(DensityMatrix(big))
            for s in (0.1, 0.5, 0.9):
                lhs = q_overlap(tilde[0], tilde[1], s)
                rhs = delta**4 * q_overlap(states[0], states[1], s)
                rel = abs(lhs - rhs) / max(abs(rhs), 1e-300)
                worst_rel = max(worst_rel, rel)
                if rel > 1e-10:
                    identity_ok = False

    floor_ok = True
    for _ in range(10):
        states = [random_density_matrix(2, rng) for _ in range(2)]
        for epsilon in (0.2, 0.5):
            _, diag = epsilon_detector(states, epsilon)
            if diag.lambda_min_gram < epsilon**2 * (1.0 - 1e-9):
                floor_ok = False

    sweep = run_power_experiment(_states_zero_plus(), range(1, 9), "epsilon").rows
    sweep_floor_ok = all(
        row.lambda_min_gram >= row.epsilon**2 * (1.0 - 1e-9) for row in sweep
    )
    inequality_ok = all(row.err <= row.error_bound + 1e-12 for row in sweep)
    clauses = [
        (
            "perturbed-overlap identity to 1e-10 relative",
            identity_ok,
            f"worst relative deviation {worst_rel:.2e}",
        ),
        ("Gram floor >= eps^2 on every embedded run", floor_ok and sweep_floor_ok, ""),
        ("embedded error inequality at every n in 1..8", inequality_ok, ""),
    ]
    _report(7, "embedding identities, Gram floor, and error inequality", clauses)


def test_criterion_08_embedded_detector_rate():
    xi = multiple_qcb(_states_zero_plus()).xi
    rows = run_power_experiment(_states_zero_plus(), range(1, 9), "epsilon").rows
    late = [row for row in rows if row.n >= 6]
    ok = all(row.exponent > xi / 3.0 for row in late)
    detail = ", ".join(f"n={row.n}: {row.exponent:.3f}" for row in late)
    _report(
        8,
        "embedded detector beats a third of the ceiling for n >= 6",
        [(f"exponent_n > xi/3 = {xi / 3.0:.4f}", ok, detail)],
    )


def test_criterion_09_binary_optimality():
    states = _states_zero_plus()
    det = holevo_helstrom(*states)
    err = evaluate_errors(states, det).averaged
    bayes = verify_bayes_conditions(states, det, tol=1e-8)
    rows = run_power_experiment(states, range(1, 13), "helstrom").rows
    exponent_12 = rows[-1].exponent
    clauses = [
        (
            "Err = (1 - 1/sqrt(2))/2 within 1e-10",
            abs(err - HELSTROM_ERR_ZERO_PLUS) <= 1e-10,
            f"err = {err!r}",
        ),
        ("optimality certificate passes at 1e-8", bayes.passed, ""),
        (
            "n-sweep exponent >= 0.80 log2 at n = 12",
            exponent_12 >= 0.80 * LOG2,
            f"exponent_12 = {exponent_12:.4f}",
        ),
    ]
    _report(9, "binary optimal test values and sweep", clauses)


def test_criterion_10_square_root_measurement_bound():
    rng = np.random.default_rng(59)
    failures = 0
    worst = math.inf
    for _ in range(100):
        dim = int(rng.integers(2, 5))
        states = [
            DensityMatrix(np.outer(v, v.conj()))
            for v in (random_state_vector(dim, rng), random_state_vector(dim, rng))
        ]
        succ_pgm = 1.0 - evaluate_errors(states, pgm(states, [0.5, 0.5])).averaged
        succ_opt = 1.0 - evaluate_errors(states, holevo_helstrom(*states)).averaged
        margin = succ_pgm - succ_opt**2
        worst = min(worst, margin)
        if margin < -1e-9:
            failures += 1
    _report(
        10,
        "square-root measurement success-squared bound",
        [
            (
                "Succ(PGM) >= Succ(opt)^2 - 1e-9 on 100 random pure pairs",
                failures == 0,
                f"smallest margin {worst:.3e}",
            )
        ],
    )


def test_criterion_11_oracle_equivalence():
    rng = np.random.default_rng(61)
    worst = 0.0
    for _ in range(50):
        r = int(rng.integers(2, 4))
        n = int(rng.integers(1, 5))
        states = [
            random_density_matrix(2, rng, rank=int(rng.integers(1, 3)))
            for _ in range(r)
        ]
        implicit = run_power_experiment(states, [n], "gs").rows[0].err
        powered = []
        for rho in states:
            mat = rho.mat
            for _ in range(n - 1):
                mat = np.kron(mat, rho.mat)
            powered.append(DensityMatrix(mat))
        det, _ = gs_detector(powered)
        dense = evaluate_errors(powered, det).averaged
        worst = max(worst, abs(implicit - dense))
    _report(
        11,
        "implicit product evaluation equals explicit Kronecker materialization",
        [
            (
                "50 random ensembles, d = 2, n <= 4, within 1e-9",
                worst <= 1e-9,
                f"worst deviation {worst:.3e}",
            )
        ],
    )
