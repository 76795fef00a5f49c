"""Acceptance criteria, each run at its stated tolerance and time budget.

Every test prints one ``[acceptance k] PASS|FAIL`` line, whatever the outcome.
"""

import contextlib
import csv
import io
import json
import math
import time

import numpy as np
import pytest

from gaussbound import fock
from gaussbound.bounds import (
    chernoff_bound,
    full_report,
    m_s,
    minkowski_bound,
    q_bar_s,
    q_s,
    y_s,
)
from gaussbound.cli import main
from gaussbound.states import thermal, vacuum
from gaussbound.symplectic import build_omega, random_symplectic, symplectic_spectrum, williamson

from conftest import random_spd, random_state
from test_inequalities import appendix_checks

SEED = 20240607
BETAS = (1.5, 2.0, 5.0, 10.0)


@pytest.fixture
def criterion(capsys):
    @contextlib.contextmanager
    def run(number, title, budget):
        failures = []
        t0 = time.perf_counter()
        error = None
        try:
            yield failures
        except Exception as exc:  # reported, then re-raised
            error = exc
            failures.append(f"{type(exc).__name__}: {exc}")
        elapsed = time.perf_counter() - t0
        if elapsed >= budget:
            failures.append(f"runtime {elapsed:.2f} s exceeds {budget} s")
        status = "FAIL" if failures else "PASS"
        detail = "; ".join(failures[:3]) + (f" (+{len(failures) - 3} more)" if len(failures) > 3 else "")
        with capsys.disabled():
            print(f"\n[acceptance {number}] {status} {title} ({elapsed:.2f} s / {budget} s){': ' + detail if detail else ''}")
        if error is not None:
            raise error
        assert not failures, detail

    return run


def rel_err(x, ref):
    return abs(x - ref) / abs(ref)


def cli_json(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], out, err)
    assert code == 0, err.getvalue()
    return json.loads(out.getvalue())


def state_file(path, doc):
    path.write_text(json.dumps({"schema_version": "1", "builder": doc}))
    return path


def test_1_single_mode_closed_forms(criterion, tmp_path):
    vac = state_file(tmp_path / "vac.json", {"kind": "vacuum"})
    with criterion(1, "vacuum vs thermal closed forms via the CLI", budget=1.0) as failures:
        for beta in BETAS:
            th = state_file(tmp_path / f"th{beta}.json", {"kind": "thermal", "params": {"nu": [beta]}})
            d = cli_json("discriminate", vac, th, "--format", "json")
            expected = {
                "M": (d["minkowski"]["value"], 1 / (1 + beta)),
                "Y": (d["young"]["value"], 1 / (2 * math.sqrt(beta))),
                "F": (d["fidelity"]["f"], 2 / (1 + beta)),
                "F_minus": (d["fidelity"]["f_minus"], 0.5 - 0.5 * math.sqrt((beta - 1) / (beta + 1))),
                "F_plus": (d["fidelity"]["f_plus"], 1 / math.sqrt(2 * (1 + beta))),
            }
            if beta == 2.0:
                for key, ref in (
                    ("M", 0.333333333),
                    ("Y", 0.353553391),
                    ("F_plus", 0.408248290),
                    ("F_minus", 0.211324865),
                ):
                    if f"{expected[key][0]:.9f}" != f"{ref:.9f}":
                        failures.append(f"beta=2 {key} prints {expected[key][0]:.9f}, expected {ref:.9f}")
            for key, (got, ref) in expected.items():
                if rel_err(got, ref) >= 1e-9:
                    failures.append(f"beta={beta} {key}={got!r} vs {ref!r}")


def test_2_minkowski_equals_chernoff(criterion):
    with criterion(2, "P_QC^(1) = M^(1) over a 50-point beta sweep", budget=5.0) as failures:
        for beta in np.linspace(1.0, 10.0, 50):
            a, b = vacuum(1), thermal(1, beta)
            qc = chernoff_bound(a, b).value
            mk = minkowski_bound(a, b).value
            if abs(qc - mk) >= 1e-8:
                failures.append(f"beta={beta:.4f}: P_QC={qc!r} M={mk!r}")


def test_3_oracle_tightness(criterion):
    with criterion(3, "Fock Helstrom error equals 1/(1+beta) inside the fidelity sandwich", budget=2.0) as failures:
        for beta in BETAS:
            a, b = vacuum(1), thermal(1, beta)
            fa, fb = fock.fock_pair(a, b, tail_cap=1e-12)
            p = fock.helstrom_error(fa, fb)
            if abs(p - 1 / (1 + beta)) >= 1e-8:
                failures.append(f"beta={beta}: helstrom {p!r}")
            r = full_report(a, b)
            chain = (r.fidelity.f_minus, p, r.chernoff.value, r.fidelity.f_plus)
            if not all(x <= y + 1e-8 for x, y in zip(chain, chain[1:])):
                failures.append(f"beta={beta}: sandwich broken {chain}")
            if abs(p - r.chernoff.value) >= 1e-8:
                failures.append(f"beta={beta}: P={p!r} differs from P_QC={r.chernoff.value!r}")


def test_4_gaussian_vs_fock_q_s(criterion):
    nus = (1.0, 1.5, 3.0, 10.0)
    with criterion(4, "Gaussian Q_s matches the Fock oracle on thermal pairs", budget=10.0) as failures:
        for nu_a in nus:
            for nu_b in nus:
                a, b = thermal(1, nu_a), thermal(1, nu_b)
                fa, fb = fock.fock_pair(a, b)
                for s in (0.25, 0.5, 0.75):
                    g, f = q_s(a, b, s).value, fock.q_s_fock(fa, fb, s)
                    if rel_err(g, f) >= 1e-8:
                        failures.append(f"({nu_a}, {nu_b}, s={s}): {g!r} vs {f!r}")


def test_5_ordering_chain(criterion):
    rng = np.random.default_rng(SEED)
    s_grid = np.linspace(0.0, 1.0, 21)
    s_grid[0], s_grid[-1] = 1e-6, 1 - 1e-6  # endpoints are inadmissible for mixed states
    with criterion(5, "Q_s <= Qbar_s <= M_s <= Y_s and P_QC <= M <= Y on 500 random pairs", budget=60.0) as failures:
        for i in range(500):
            n = 1 + i % 3
            a, b = random_state(rng, n), random_state(rng, n)
            for s in s_grid:
                chain = (
                    q_s(a, b, s).value,
                    q_bar_s(a, b, s).value,
                    m_s(a.spectrum, b.spectrum, s).value,
                    y_s(a.spectrum, b.spectrum, s).value,
                )
                if not all(x <= y + 1e-10 for x, y in zip(chain, chain[1:])):
                    failures.append(f"pair {i} s={s:.3f}: {chain}")
            for N in (1, 5, 20):
                r = full_report(a, b, N, bounds="qc,mink,young")
                qc, mk, yg = r.chernoff.value, r.minkowski.value, r.young.value
                if not (qc <= mk * (1 + 1e-12) and mk <= yg * (1 + 1e-12)):
                    failures.append(f"pair {i} N={N}: {qc!r}, {mk!r}, {yg!r}")


def test_6_williamson(criterion):
    rng = np.random.default_rng(SEED + 6)
    with criterion(6, "Williamson residuals and spectrum invariance on 500 random CMs", budget=30.0) as failures:
        for i in range(500):
            n = 1 + i % 4
            V = random_state(rng, n).cov
            S, nu = williamson(V)
            omega = build_omega(n)
            D = np.diag(np.repeat(nu, 2))
            rec = np.max(np.abs(S @ D @ S.T - V))
            symp = np.max(np.abs(S @ omega @ S.T - omega))
            if rec >= 1e-9 or symp >= 1e-9:
                failures.append(f"cm {i}: reconstruction {rec:.2e}, symplectic {symp:.2e}")
            T = random_symplectic(int(rng.integers(2**31)), n, 0.5)
            moved = symplectic_spectrum(T @ V @ T.T)
            if np.max(np.abs(moved - nu) / nu) >= 1e-8:
                failures.append(f"cm {i}: spectrum moved {np.max(np.abs(moved - nu) / nu):.2e}")


def test_7_appendix_inequalities(criterion):
    rng = np.random.default_rng(SEED + 7)
    with criterion(7, "determinant and Young inequalities on 1000 SPD pairs per size", budget=10.0) as failures:
        for m in (2, 4, 6):
            for i in range(1000):
                K = random_spd(rng, m)
                L = random_spd(rng, m, spread=float(rng.uniform(0.1, 3.0)))
                for name, lhs, rhs in appendix_checks(K, L):
                    failures.append(f"m={m} pair {i} {name}: {lhs!r} < {rhs!r}")


def test_8_sweep_shape(criterion, tmp_path):
    spec = tmp_path / "sweep.json"
    spec.write_text(
        json.dumps(
            {
                "family": "vacuum_vs_thermal",
                "parameter": {"name": "beta", "start": 1.0, "stop": 10.0, "steps": 91},
                "oracle": True,
            }
        )
    )
    with criterion(8, "sweep CSV ordering and monotonicity over beta in [1, 10]", budget=30.0) as failures:
        out, err = io.StringIO(), io.StringIO()
        assert main(["sweep", str(spec)], out, err) == 0, err.getvalue()
        rows = [{k: float(v) for k, v in r.items()} for r in csv.DictReader(io.StringIO(out.getvalue()))]
        if len(rows) != 91:
            failures.append(f"{len(rows)} rows")
        for r in rows:
            tag = f"beta={r['param']:.1f}"
            if not r["F_minus"] <= r["helstrom"] + 1e-9:
                failures.append(f"{tag}: F_minus > helstrom")
            if not r["F_minus"] <= r["PQC1"]:
                failures.append(f"{tag}: F_minus > PQC1")
            if abs(r["PQC1"] - r["M1"]) > 1e-9:
                failures.append(f"{tag}: PQC1 != M1")
            if not r["M1"] <= r["Y1"]:
                failures.append(f"{tag}: M1 > Y1")
            if not r["Y1"] <= r["F_plus"] + 1e-10:
                failures.append(f"{tag}: Y1 > F_plus")
        for key in ("Y1", "M1", "PQC1", "F_plus", "F_minus", "helstrom"):
            col = [r[key] for r in rows if r["param"] > 1.0]
            if any(y > x for x, y in zip(col, col[1:])):
                failures.append(f"{key} increases somewhere")
