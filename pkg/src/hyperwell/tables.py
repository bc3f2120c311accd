"""Reproduction of the published reference tables.

Stored values live in ``data/reference_values.csv`` with one row per printed
number, keeping the printed decimal string so the number of printed digits
is known.  Each table has its own tolerance rule:

* ``1``: 1 unit in the last printed decimal (values are truncated, not rounded)
* ``2``, ``3``, ``4``, ``5``, ``6``: 2 units in the last printed decimal
* ``A2``: at least 15 matching significant digits in both ``epsilon`` and ``v``
"""
from __future__ import annotations

import csv
import importlib.resources
import re
from collections import defaultdict
from dataclasses import dataclass

import mpmath as mp

from .aim import AimOptions, AimProblem, aim_find_eigenvalues
from .errors import UsageError
from .exact_pt import pt_eigenvalue
from .qes import qes_enumerate, qes_epsilon
from .states import Parity

TABLE_IDS = ("1", "2", "3", "4", "5", "6", "A2")
ULP_TOLERANCE = {"1": 1, "2": 2, "3": 2, "4": 2, "5": 2, "6": 2}
A2_SIGNIFICANT = 15
# iteration ceiling for the exactly solvable calibration table
TABLE1_MAX_ITERATIONS = 30

_SURD = re.compile(r"^(\d+)\+(\d+)\*sqrt\((\d+)\)$")


def parse_strength(text: str) -> mp.mpf:
    """A decimal, or ``a+b*sqrt(c)`` as used for the closed-form strengths."""
    text = text.strip()
    match = _SURD.match(text)
    if match:
        a, b, c = (int(g) for g in match.groups())
        return a + b * mp.sqrt(c)
    return mp.mpf(text)


def printed_decimals(text: str) -> int:
    return len(text.split(".")[1]) if "." in text else 0


@dataclass(frozen=True)
class ReferenceRow:
    table: str
    m: int
    v_text: str
    beta: Parity
    n: int
    N: int | None
    epsilon_text: str
    iterations: int | None
    kind: str

    @property
    def v(self) -> mp.mpf:
        return parse_strength(self.v_text)

    @property
    def epsilon(self) -> mp.mpf:
        return mp.mpf(self.epsilon_text)

    @property
    def decimals(self) -> int:
        return printed_decimals(self.epsilon_text)


@dataclass(frozen=True)
class RowReport:
    row: ReferenceRow
    computed: mp.mpf
    error: mp.mpf
    matched: int
    required: int
    iterations: int | None
    passed: bool
    note: str = ""
    computed_v: mp.mpf | None = None
    method: str = "aim"


def load_rows(table: str | None = None) -> list[ReferenceRow]:
    source = importlib.resources.files("hyperwell") / "data" / "reference_values.csv"
    with source.open("r", encoding="utf-8") as fh:
        rows = [
            ReferenceRow(
                table=r["table"],
                m=int(r["m"]),
                v_text=r["v"],
                beta=Parity.coerce(r["beta"]),
                n=int(r["n"]),
                N=int(r["N"]) if r["N"] else None,
                epsilon_text=r["epsilon"],
                iterations=int(r["iterations"]) if r["iterations"] else None,
                kind=r["kind"],
            )
            for r in csv.DictReader(fh)
        ]
    if table is None:
        return rows
    if table not in TABLE_IDS:
        raise UsageError(f"unknown table {table!r}; choose from {', '.join(TABLE_IDS)}")
    return [r for r in rows if r.table == table]


def matched_decimals(computed, printed: str, ulps: int) -> int:
    """Largest ``d`` up to the printed count with ``|error| <= ulps * 10**-d``."""
    error = abs(mp.mpf(computed) - mp.mpf(printed))
    d = printed_decimals(printed)
    while d > 0 and error > ulps * mp.mpf(10) ** -d:
        d -= 1
    return d


def significant_digits(computed, printed: str) -> int:
    reference = mp.mpf(printed)
    error = abs(mp.mpf(computed) - reference)
    if error == 0:
        return mp.mp.dps
    return max(0, int(mp.floor(-mp.log10(error / abs(reference)))))


def _row_report(row: ReferenceRow, computed, iterations, note: str = "", budget: int | None = None,
                method: str = "aim") -> RowReport:
    ulps = ULP_TOLERANCE[row.table]
    matched = matched_decimals(computed, row.epsilon_text, ulps)
    passed = matched == row.decimals
    if budget is not None and (iterations is None or iterations > budget):
        passed = False
        note = (note + "; " if note else "") + f"iterations {iterations} exceed budget {budget}"
    return RowReport(row, computed, abs(computed - row.epsilon), matched, row.decimals, iterations, passed, note,
                     method=method)


def iteration_budget(row: ReferenceRow) -> int | None:
    if row.kind != "aim":
        return None
    if row.table == "1":
        return TABLE1_MAX_ITERATIONS
    return 2 * row.iterations


def sector_key(row: ReferenceRow):
    return (row.table, row.m, row.v_text, row.beta)


def solve_sector(m: int, v, beta, levels: int, options: AimOptions | None = None):
    base = options or AimOptions()
    opts = AimOptions(**{**base.__dict__, "levels": levels})
    return aim_find_eigenvalues(AimProblem(m, beta, v), opts)


def reproduce_exact_pt(rows) -> list[RowReport]:
    return [_row_report(r, pt_eigenvalue(r.v, r.beta, r.n), None, method="exact") for r in rows]


def reproduce_aim(rows, options: AimOptions | None = None) -> list[RowReport]:
    """AIM rows grouped by sector so each potential is scanned once."""
    groups = defaultdict(list)
    for r in rows:
        if r.kind == "aim":
            groups[sector_key(r)].append(r)
    out = []
    for (_, m, _, beta), members in groups.items():
        levels = max(r.n for r in members) + 1
        found = solve_sector(m, members[0].v, beta, levels, options)
        for r in members:
            if r.n >= len(found):
                out.append(RowReport(r, mp.nan, mp.inf, 0, r.decimals, None, False, "state not found"))
                continue
            res = found[r.n]
            note = "" if res.converged else ",".join(res.flags) or "not converged"
            if r.table in ("5", "6") and res.iterations and res.iterations > 45:
                note = (note + "; " if note else "") + f"{res.iterations} iterations (> 45)"
            report = _row_report(r, res.epsilon, res.iterations, note, iteration_budget(r))
            if not res.converged:
                report = RowReport(**{**report.__dict__, "passed": False})
            out.append(report)
    return out


def reproduce_qes_rows(rows) -> list[RowReport]:
    """Closed-form rows of the m = 2 tables: the nearest pair of the given degree."""
    out = []
    for r in rows:
        if r.kind != "exact":
            continue
        if _SURD.match(r.v_text):
            eps = qes_epsilon(r.N, r.beta, r.v)
            out.append(_row_report(r, eps, None, method="quasi-exact"))
            continue
        pairs = qes_enumerate(r.N, r.beta)
        best = min(pairs, key=lambda p: abs(p.v - r.v))
        note = f"closed-form strength {mp.nstr(best.v, 20)}"
        out.append(_row_report(r, best.epsilon, None, note, method="quasi-exact"))
    return out


def reproduce_pair_table(rows) -> list[RowReport]:
    out = []
    cache = {}
    for r in rows:
        key = (r.N, r.beta)
        if key not in cache:
            cache[key] = qes_enumerate(r.N, r.beta)
        pairs = cache[key]
        if not pairs:
            out.append(RowReport(r, mp.nan, mp.inf, 0, A2_SIGNIFICANT, None, False, "no pairs found", None, "quasi-exact"))
            continue
        best = min(pairs, key=lambda p: abs(p.v - r.v))
        digits = min(significant_digits(best.epsilon, r.epsilon_text), significant_digits(best.v, r.v_text))
        note = f"{len(pairs)} pairs for N={r.N}"
        out.append(
            RowReport(r, best.epsilon, abs(best.epsilon - r.epsilon), digits, A2_SIGNIFICANT, None,
                      digits >= A2_SIGNIFICANT, note, best.v, "quasi-exact")
        )
    return out


def reproduce_table(table: str, options: AimOptions | None = None, include_aim: bool = True) -> list[RowReport]:
    rows = load_rows(table)
    if table == "A2":
        return reproduce_pair_table(rows)
    if table == "1":
        reports = reproduce_exact_pt(rows)
        return reports + (reproduce_aim(rows, options) if include_aim else [])
    reports = reproduce_qes_rows(rows)
    if include_aim:
        reports += reproduce_aim(rows, options)
    order = {id(r): i for i, r in enumerate(rows)}
    return sorted(reports, key=lambda rep: order[id(rep.row)])
