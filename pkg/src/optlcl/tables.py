"""Reference parameter and threshold tables for the built-in catalog, with golden checks."""

from __future__ import annotations

import csv
import io
from fractions import Fraction as F

from .catalog import NAMES, get_example
from .classifier import COMPLEXITY, threshold_report
from .parameters import FIELDS, compute_all
from .problem import BOT, format_value

# None marks an entry that the reference leaves open ("-") or that is not
# computed for the problem kind.
EXPECTED_PARAMS = {
    "max-independent-set": dict(beta_opt=F(1, 2), beta_flex=F(1, 2), delta_flex=True, beta_coprime=None,
                                beta_gap=F(1, 2), delta_gap=True, beta_const=F(0)),
    "min-dominating-set": dict(beta_opt=F(1, 3), beta_flex=F(1, 3), delta_flex=True, beta_coprime=None,
                               beta_gap=F(1, 3), delta_gap=True, beta_const=F(1)),
    "min-vertex-coloring": dict(beta_opt=F(2), beta_flex=None, delta_flex=None, beta_coprime=F(3),
                                beta_gap=None, delta_gap=None, beta_const=BOT),
    "max-domatic-partition": dict(beta_opt=F(3), beta_flex=None, delta_flex=None, beta_coprime=F(2),
                                  beta_gap=None, delta_gap=None, beta_const=F(1)),
    "sloppy-coloring": dict(beta_opt=F(1), beta_flex=F(2), delta_flex=False, beta_coprime=None,
                            beta_gap=F(3), delta_gap=True, beta_const=F(100)),
}

EXPECTED_THRESHOLDS = {
    "max-independent-set": [("{1}", "D"), ("(1,inf)", "B")],
    "min-dominating-set": [("{1}", "D"), ("(1,3)", "B"), ("[3,inf)", "A")],
    "min-vertex-coloring": [("[1,3/2)", "D"), ("[3/2,inf)", "C")],
    "max-domatic-partition": [("[1,3/2)", "D"), ("[3/2,3)", "C"), ("[3,inf)", "A")],
    "sloppy-coloring": [("[1,2)", "D"), ("[2,3]", "C"), ("(3,100)", "B"), ("[100,inf)", "A")],
}


def parameter_rows() -> list[dict]:
    rows = []
    for name in NAMES:
        params = compute_all(get_example(name))
        row = {"example": name}
        row.update({k: getattr(params, k) for k in FIELDS})
        rows.append(row)
    return rows


def threshold_rows() -> list[dict]:
    rows = []
    for name in NAMES:
        p = get_example(name)
        rep = threshold_report(compute_all(p), p.objective, p.aggregation)
        for iv, c in rep.pieces:
            det, rand = COMPLEXITY[c.cls]
            rows.append({"example": name, "alpha": str(iv), "class": c.cls,
                         "strategy": c.strategy.title, "det": det, "rand": rand})
    return rows


def check() -> list[str]:
    """Mismatches against the reference tables; empty when everything matches."""
    problems = []
    for row in parameter_rows():
        exp = EXPECTED_PARAMS[row["example"]]
        for k in FIELDS:
            if exp[k] is None:
                continue
            if row[k] != exp[k] or (exp[k] is BOT) != (row[k] is BOT):
                problems.append(f"{row['example']}: {k} = {format_value(row[k])}, expected {format_value(exp[k])}")
    got: dict[str, list] = {}
    for row in threshold_rows():
        got.setdefault(row["example"], []).append((row["alpha"], row["class"]))
    for name, exp in EXPECTED_THRESHOLDS.items():
        if got.get(name) != exp:
            problems.append(f"{name}: intervals {got.get(name)}, expected {exp}")
    return problems


def _align(rows: list[list[str]]) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows) + "\n"


def render_text() -> str:
    out = ["Problem parameters", ""]
    head = ["example"] + list(FIELDS)
    body = [[r["example"]] + [format_value(r[k]) for k in FIELDS] for r in parameter_rows()]
    out.append(_align([head] + body))
    out += ["Complexity by approximation ratio", ""]
    head = ["example", "alpha", "strategy", "det", "rand"]
    body = [[r["example"], r["alpha"], r["strategy"], r["det"], r["rand"]] for r in threshold_rows()]
    out.append(_align([head] + body))
    return "\n".join(out)


def render_csv() -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["example", "alpha", "class", "strategy", "det", "rand"] + list(FIELDS))
    params = {r["example"]: r for r in parameter_rows()}
    for r in threshold_rows():
        w.writerow([r["example"], r["alpha"], r["class"], r["strategy"], r["det"], r["rand"]]
                   + [format_value(params[r["example"]][k]) for k in FIELDS])
    return buf.getvalue()
