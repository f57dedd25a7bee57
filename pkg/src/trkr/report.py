"""JSON and text rendering of homology reports and oracle series."""

from __future__ import annotations

import json
from collections import Counter

from .homology import HomologyReport
from .modules import GradedQaModule
from .moyoracle import ModuleSeries

SCHEMA_VERSION = 1

_SUP = str.maketrans("-0123456789", "⁻⁰¹²³⁴⁵⁶⁷⁸⁹")


def _pow(var: str, n: int) -> str:
    if n == 1:
        return var
    return var + str(n).translate(_SUP)


def _q_sum(terms: dict[int, int]) -> str:
    out = ""
    for k in sorted(terms):
        m = terms[k]
        if not m:
            continue
        sign = "-" if m < 0 else ("+" if out else "")
        m = abs(m)
        body = "1" if k == 0 else _pow("q", k)
        out += sign + (body if m == 1 else str(m) if k == 0 else f"{m}{body}")
    return out


def _tau_group(j: int, inner: str, many: bool) -> str:
    if j == 0:
        return f"({inner})" if many else inner
    tau = _pow("τ", j)
    if inner == "1":
        return tau
    if inner.startswith("1/"):
        return tau + inner[1:]
    return f"{tau}({inner})" if many else f"{tau} {inner}"


def render_free(terms: dict[tuple[int, int], int]) -> str:
    by_j: dict[int, dict[int, int]] = {}
    for (j, k), m in terms.items():
        if m:
            by_j.setdefault(j, {})[k] = by_j.setdefault(j, {}).get(k, 0) + m
    out = [_tau_group(j, _q_sum(ks), len(ks) > 1) for j, ks in sorted(by_j.items())]
    return " + ".join(out) if out else "0"


def render_torsion(terms: dict[tuple[int, int], int], kmax: int | None) -> str:
    """Length-one torsion; a run of equal multiplicities reaching the top of the
    window is shown as a tail q^k0/(1-q^2)."""
    by_j: dict[int, dict[int, int]] = {}
    for (j, k), m in terms.items():
        if m:
            by_j.setdefault(j, {})[k] = by_j.setdefault(j, {}).get(k, 0) + m
    pieces = []
    for j, ks in sorted(by_j.items()):
        finite = dict(ks)
        tails: dict[int, int] = {}
        if kmax is not None:
            for top in (kmax, kmax - 1):
                if top not in finite:
                    continue
                m = finite[top]
                k0 = top
                while finite.get(k0 - 2) == m:
                    k0 -= 2
                for k in range(k0, top + 1, 2):
                    del finite[k]
                tails[k0] = m
        inner = []
        if finite:
            inner.append(_q_sum(finite))
        for k0, m in sorted(tails.items()):
            coeff = "" if m == 1 else str(m)
            inner.append(f"{coeff}{_pow('q', k0) if k0 else '1'}/(1−q²)")
        text = "+".join(inner)
        pieces.append(_tau_group(j, text, len(inner) > 1 or len(finite) > 1))
    return " + ".join(pieces) if pieces else "0"


def module_lines(M: GradedQaModule, kmax: int | None = None) -> list[str]:
    lines = []
    for e, i in M.components():
        free = dict(M.free.get((e, i), Counter()))
        tor = M.torsion.get((e, i), Counter())
        long = {key: m for key, m in tor.items() if key[0] != 1 and m}
        short = {(j, k): m for (l, j, k), m in tor.items() if l == 1 and m}
        line = f"ε={e} i={i} free: {render_free(free)}; torsion: {render_torsion(short, kmax)}"
        if long:
            line += "; longer torsion: " + ", ".join(
                f"Q[a]/(a^{l}){{{j},{k}}}×{m}" for (l, j, k), m in sorted(long.items()))
        lines.append(line)
    return lines


def report_json(R: HomologyReport) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "braid": str(R.braid),
        "N": R.N,
        "sl": R.sl,
        "window": R.window.to_json(),
        "components": R.module.to_json(),
        "sln": [{"eps": e, "i": i, "k": k, "dim": d} for (e, i, k), d in sorted(R.sln_dims.items()) if d],
        "audits": R.audits,
    }


def report_text(R: HomologyReport) -> str:
    w = R.window
    head = [f"braid {R.braid}  N={R.N}  sl={R.sl}",
            f"window j∈[{w.jmin},{w.jmax}] k∈[{w.kmin},{w.kmax}]"]
    body = module_lines(R.module, w.kmax) or ["(zero)"]
    sln = {}
    for (e, i, k), d in R.sln_dims.items():
        if d:
            sln.setdefault((e, i), {})[k] = d
    tail = [f"sl(N) ε={e} i={i}: {_q_sum(ks)}" for (e, i), ks in sorted(sln.items(), key=lambda t: (t[0][1], t[0][0]))]
    audits = [f"audit {name}: {'pass' if a.get('passed') else 'FAIL'}" for name, a in sorted(R.audits.items())]
    for a in R.audits.values():
        audits += [f"  {f}" for f in a.get("failures", [])[:10]]
    return "\n".join(head + body + tail + audits)


def series_json(S: ModuleSeries) -> dict:
    def poly(p):
        return [{"j": j, "k": k, "coeff": c} for (j, k), c in sorted(p.items())]

    return {
        "variant": S.variant,
        "depth": S.depth,
        "free": {str(e): poly(S.free[e]) for e in (0, 1) if S.free[e]},
        "torsion": {str(e): poly(S.torsion[e]) for e in (0, 1) if S.torsion[e]},
    }


def series_text(S: ModuleSeries) -> str:
    den = "(1−q²)" if S.depth == 1 else f"(1−q²){str(S.depth).translate(_SUP)}"
    lines = []
    for e in (0, 1):
        if S.free[e]:
            lines.append(f"ε={e} free: {render_free(S.free[e])}")
        if S.torsion[e]:
            lines.append(f"ε={e} torsion: [{render_free(S.torsion[e])}]/{den}")
    return "\n".join(lines) if lines else "0"


def dumps(obj) -> str:
    """Deterministic JSON."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)
