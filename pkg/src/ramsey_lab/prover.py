"""Arrowing decisions, Ramsey-value scans, DIMACS export, table derivation.

The engine is a counter-based DPLL over edge variables (1 = red): every
copy of the red target contributes an all-negative covering clause, every
copy of the blue target an all-positive one.  Unit propagation over these
clauses plus chronological backtracking is complete, so UNSAT verdicts are
sound; witnesses are re-verified by the embedder before being returned.

Branching is deterministic: lowest-rank unassigned edge, red phase first.
An optional lex-leader restriction under adjacent vertex transpositions
(red preceding blue in the value order) prunes color-isomorphic subtrees;
it is off by default and never changes verdicts, only which witness shows
up first.
"""

from __future__ import annotations

import hashlib
import json
import math
import time
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import _kernels
from ._backend import BACKEND, dpll_step
from .coloring import TwoColoring, all_edges, edge_rank
from .core import CYCLE, PATH, LooseTemplate, cycle_template, path_template
from .embedder import copy_rank_matrix, find_embedding

_CHUNK = 1 << 18


@dataclass(frozen=True)
class ArrowingVerdict:
    status: str  # SAT | UNSAT | UNKNOWN
    witness: Optional[TwoColoring]
    stats: dict
    budget: dict

    def to_json_obj(self) -> dict:
        obj = {"status": self.status, "stats": dict(self.stats),
               "budget": dict(self.budget)}
        if self.witness is not None:
            obj["witness"] = self.witness.to_json_obj()
        return obj


@dataclass(frozen=True)
class RamseyClaim:
    k: int
    red: Tuple[str, int]
    blue: Tuple[str, int]
    value: Optional[int]
    lower: int
    upper: Optional[int]
    provenance: str  # paper-formula | search-verified | witness-only | theorem-derived | theorem-extended
    chain: Tuple[str, ...] = ()
    witness: Optional[TwoColoring] = None
    stats: dict = field(default_factory=dict)

    def to_json_obj(self) -> dict:
        obj = {
            "k": self.k,
            "red": {"kind": self.red[0], "length": self.red[1]},
            "blue": {"kind": self.blue[0], "length": self.blue[1]},
            "value": self.value,
            "lower": self.lower,
            "upper": self.upper,
            "provenance": self.provenance,
            "chain": list(self.chain),
            "stats": dict(self.stats),
        }
        if self.witness is not None:
            obj["witness"] = self.witness.to_json_obj()
        return obj


def _template_of(k: int, family: Tuple[str, int]) -> LooseTemplate:
    kind, n = family
    if kind == PATH:
        return path_template(k, int(n))
    if kind == CYCLE:
        return cycle_template(k, int(n))
    raise ValueError(f"invalid-parameter: unknown template kind {kind!r}")


def _build_instance(k: int, N: int, red_t: LooseTemplate, blue_t: LooseTemplate):
    """CSR clause arrays plus per-variable occurrence lists."""
    E = math.comb(N, k)
    red_rows = copy_rank_matrix(N, k, red_t)
    blue_rows = copy_rank_matrix(N, k, blue_t)
    n_clauses = red_rows.shape[0] + blue_rows.shape[0]
    lens = np.concatenate([
        np.full(red_rows.shape[0], red_rows.shape[1], dtype=np.int64),
        np.full(blue_rows.shape[0], blue_rows.shape[1], dtype=np.int64),
    ]) if n_clauses else np.zeros(0, dtype=np.int64)
    cptr = np.zeros(n_clauses + 1, dtype=np.int32)
    if n_clauses:
        cptr[1:] = np.cumsum(lens)
    lits = np.concatenate([red_rows.ravel(), blue_rows.ravel()]).astype(np.int32) \
        if n_clauses else np.zeros(0, dtype=np.int32)
    sv = np.concatenate([
        np.zeros(red_rows.shape[0], dtype=np.int8),
        np.ones(blue_rows.shape[0], dtype=np.int8),
    ]) if n_clauses else np.zeros(0, dtype=np.int8)

    counts = np.bincount(lits, minlength=E) if lits.size else np.zeros(E, dtype=np.int64)
    occ_ptr = np.zeros(E + 1, dtype=np.int32)
    occ_ptr[1:] = np.cumsum(counts)
    occ_cl = np.zeros(lits.size, dtype=np.int32)
    cursor = occ_ptr[:-1].copy()
    for ci in range(n_clauses):
        for p in range(cptr[ci], cptr[ci + 1]):
            v = lits[p]
            occ_cl[cursor[v]] = ci
            cursor[v] += 1
    return E, lits, cptr, sv, occ_ptr, occ_cl


def _perm_tables(N: int, k: int) -> np.ndarray:
    """Edge-rank images under each adjacent vertex transposition (u, u+1)."""
    E = math.comb(N, k)
    perm = np.empty((max(N - 1, 1), E), dtype=np.int32)
    perm[:] = np.arange(E, dtype=np.int32)
    edges = all_edges(N, k)
    for g in range(N - 1):
        u, v = g + 1, g + 2
        for r, e in enumerate(edges):
            if (u in e) != (v in e):
                mapped = tuple(sorted((v if x == u else u if x == v else x)
                                      for x in e))
                perm[g, r] = edge_rank(mapped, N, k)
    return perm


def _solve_single(k: int, N: int, red_fam: Tuple[str, int], blue_fam: Tuple[str, int],
                  assumptions: Sequence[Tuple[int, int]],
                  max_nodes: Optional[int], max_secs: Optional[float],
                  symmetry: bool) -> dict:
    """One complete (or budgeted) engine run; returns a plain-dict result."""
    red_t = _template_of(k, red_fam)
    blue_t = _template_of(k, blue_fam)
    E, lits, cptr, sv, occ_ptr, occ_cl = _build_instance(k, N, red_t, blue_t)
    n_clauses = sv.shape[0]

    assign = np.full(E, -1, dtype=np.int8)
    trail = np.zeros(max(E, 1), dtype=np.int32)
    dvar = np.zeros(max(E, 1), dtype=np.int32)
    dflip = np.zeros(max(E, 1), dtype=np.int8)
    dtrail = np.zeros(max(E, 1), dtype=np.int32)
    sat_cnt = np.zeros(max(n_clauses, 1), dtype=np.int32)
    ass_cnt = np.zeros(max(n_clauses, 1), dtype=np.int32)
    st = np.zeros(8, dtype=np.int64)
    perm = _perm_tables(N, k) if symmetry else np.zeros((1, E), dtype=np.int32)

    t0 = time.monotonic()
    status = None
    for var, val in assumptions:
        if not 0 <= var < E:
            raise ValueError(f"invalid-parameter: assumption variable {var}")
        if assign[var] >= 0:
            if assign[var] != val:
                status = _kernels.UNSAT
            continue
        assign[var] = val
        trail[st[_kernels.ST_TLEN]] = var
        st[_kernels.ST_TLEN] += 1

    if E == 0:
        status = _kernels.SAT  # empty host: nothing to color, nothing forbidden

    while status is None:
        chunk = _CHUNK
        if max_nodes is not None:
            remaining = max_nodes - int(st[_kernels.ST_NODES])
            if remaining <= 0:
                status = _kernels.PAUSED
                break
            chunk = min(chunk, remaining)
        rc = dpll_step(assign, trail, dvar, dflip, dtrail, sat_cnt, ass_cnt,
                       sv, lits, cptr, occ_ptr, occ_cl, perm,
                       1 if symmetry else 0, 1, st, chunk)
        if rc != _kernels.PAUSED:
            status = rc
            break
        if max_secs is not None and time.monotonic() - t0 > max_secs:
            status = _kernels.PAUSED
            break
        if max_nodes is not None and int(st[_kernels.ST_NODES]) >= max_nodes:
            status = _kernels.PAUSED
            break

    wall = time.monotonic() - t0
    out = {
        "status": {_kernels.SAT: "SAT", _kernels.UNSAT: "UNSAT",
                   _kernels.PAUSED: "UNKNOWN"}[status],
        "nodes": int(st[_kernels.ST_NODES]),
        "propagations": int(st[_kernels.ST_PROPS]),
        "wall_secs": wall,
    }
    if out["status"] == "SAT":
        bits = np.where(assign < 0, 1, assign).astype(np.uint8)  # free vars: any value works; pick red
        out["witness_bits"] = bits.tolist()
    return out


def _solve_task(args):
    return _solve_single(*args)


def decide_arrowing(k: int, N: int, red_target: LooseTemplate,
                    blue_target: LooseTemplate, *,
                    max_nodes: Optional[int] = None,
                    max_secs: Optional[float] = None,
                    symmetry: bool = False,
                    threads: int = 1) -> ArrowingVerdict:
    """Does every red/blue coloring of K^k_N contain a red red_target or a
    blue blue_target?  UNSAT = yes (N arrows the pair), SAT = no, with a
    verified witness coloring; UNKNOWN only on budget exhaustion.
    """
    if red_target.k != k or blue_target.k != k:
        raise ValueError("invalid-parameter: target uniformity differs from k")
    if not (isinstance(N, int) and N >= 0):
        raise ValueError(f"invalid-parameter: N={N}")
    if threads < 1:
        raise ValueError(f"invalid-parameter: threads={threads}")

    budget = {"max_nodes": max_nodes, "max_secs": max_secs,
              "symmetry": symmetry, "threads": threads, "backend": BACKEND}
    red_fam = (red_target.kind, red_target.n)
    blue_fam = (blue_target.kind, blue_target.n)
    E = math.comb(N, k)

    if threads == 1 or E == 0:
        res = _solve_single(k, N, red_fam, blue_fam, (), max_nodes, max_secs, symmetry)
        results = [res]
    else:
        s = 1
        while (1 << s) < 2 * threads and s < min(E, 12):
            s += 1
        tasks = []
        for bitsv in range(1 << s):
            assumptions = tuple((i, (bitsv >> i) & 1) for i in range(s))
            tasks.append((k, N, red_fam, blue_fam, assumptions,
                          max_nodes, max_secs, symmetry))
        results = []
        sat_res = None
        with ProcessPoolExecutor(max_workers=threads) as ex:
            futs = {ex.submit(_solve_task, t) for t in tasks}
            try:
                while futs:
                    done, futs = wait(futs, return_when=FIRST_COMPLETED)
                    for f in done:
                        r = f.result()
                        results.append(r)
                        if r["status"] == "SAT" and sat_res is None:
                            sat_res = r
                    if sat_res is not None:
                        break
            finally:
                for f in futs:
                    f.cancel()
        if sat_res is not None:
            results = [sat_res] + [r for r in results if r is not sat_res]

    statuses = [r["status"] for r in results]
    if "SAT" in statuses:
        res = next(r for r in results if r["status"] == "SAT")
        status = "SAT"
    elif "UNKNOWN" in statuses:
        res, status = results[0], "UNKNOWN"
    else:
        res, status = results[0], "UNSAT"

    stats = {
        "nodes": sum(r["nodes"] for r in results),
        "propagations": sum(r["propagations"] for r in results),
        "wall_secs": max(r["wall_secs"] for r in results),
        "runs": len(results),
    }
    witness = None
    if status == "SAT":
        witness = TwoColoring(k, N, np.array(res["witness_bits"], dtype=np.uint8))
        for color, t in (("red", red_target), ("blue", blue_target)):
            if find_embedding(witness, color, t) is not None:
                raise AssertionError(f"engine bug: witness contains a {color} copy")
    return ArrowingVerdict(status, witness, stats, budget)


def compute_ramsey(k: int, red_family: Tuple[str, int], blue_family: Tuple[str, int],
                   *, max_nodes: Optional[int] = None,
                   max_secs: Optional[float] = None,
                   symmetry: bool = False, threads: int = 1,
                   max_N: Optional[int] = None) -> RamseyClaim:
    """Ascending-N scan for the exact Ramsey value of the target pair.

    Starts at the larger target's vertex count (below which any coloring is
    admissible) and stops at the first UNSAT, which is the value by
    monotonicity.  Budget exhaustion yields a bounds-only claim.
    """
    red_t = _template_of(k, red_family)
    blue_t = _template_of(k, blue_family)
    start = max(red_t.n_vertices, blue_t.n_vertices)
    lower = start  # every N < start is SAT: the larger target cannot fit
    chain: List[str] = []
    stats: Dict[str, int] = {"nodes": 0, "propagations": 0}
    witness = None
    N = start
    while max_N is None or N <= max_N:
        v = decide_arrowing(k, N, red_t, blue_t, max_nodes=max_nodes,
                            max_secs=max_secs, symmetry=symmetry, threads=threads)
        stats["nodes"] += v.stats["nodes"]
        stats["propagations"] += v.stats["propagations"]
        if v.status == "SAT":
            lower = N + 1
            witness = v.witness
            chain.append(f"SAT at N={N} (witness verified)")
            N += 1
            continue
        if v.status == "UNSAT":
            chain.append(f"UNSAT at N={N} (exhaustive)")
            return RamseyClaim(k, red_family, blue_family, value=N, lower=lower,
                               upper=N, provenance="search-verified",
                               chain=tuple(chain), witness=witness, stats=stats)
        chain.append(f"UNKNOWN at N={N} (budget exhausted)")
        break
    return RamseyClaim(k, red_family, blue_family, value=None, lower=lower,
                       upper=None, provenance="witness-only",
                       chain=tuple(chain), witness=witness, stats=stats)


# ---------------------------------------------------------------------------
# DIMACS export
# ---------------------------------------------------------------------------

def export_dimacs(k: int, N: int, red_target: LooseTemplate,
                  blue_target: LooseTemplate) -> Tuple[str, dict]:
    """CNF text plus sidecar variable map.

    Variable rank+1 asserts "edge of colex rank is red"; red copies become
    all-negative clauses, blue copies all-positive, in canonical row order.
    """
    if red_target.k != k or blue_target.k != k:
        raise ValueError("invalid-parameter: target uniformity differs from k")
    if red_target.n_vertices > N or blue_target.n_vertices > N:
        raise ValueError("invalid-parameter: target does not fit host")
    E = math.comb(N, k)
    red_rows = copy_rank_matrix(N, k, red_target)
    blue_rows = copy_rank_matrix(N, k, blue_target)
    varmap = {str(r + 1): list(e) for r, e in enumerate(all_edges(N, k))}
    digest = hashlib.sha256(
        json.dumps(varmap, sort_keys=True).encode()).hexdigest()
    sidecar = {
        "k": k, "n_vertices": N, "red_bit": 1,
        "red_target": {"kind": red_target.kind, "length": red_target.n},
        "blue_target": {"kind": blue_target.kind, "length": blue_target.n},
        "variables": varmap,
        "digest": f"sha256:{digest}",
    }
    lines = [
        f"c K^{k}_{N} arrowing: red {red_target.kind}_{red_target.n}, "
        f"blue {blue_target.kind}_{blue_target.n}",
        "c variable rank+1 true <=> edge at colex rank is red",
        f"c varmap-digest sha256:{digest}",
        f"p cnf {E} {red_rows.shape[0] + blue_rows.shape[0]}",
    ]
    for row in red_rows:
        lines.append(" ".join(str(-(int(r) + 1)) for r in row) + " 0")
    for row in blue_rows:
        lines.append(" ".join(str(int(r) + 1) for r in row) + " 0")
    return "\n".join(lines) + "\n", sidecar


# ---------------------------------------------------------------------------
# table derivation from cycle-cycle bases
# ---------------------------------------------------------------------------

def derive_table(k: int, base: Dict[Tuple[int, int], int], *,
                 extend_to: Optional[int] = None) -> List[RamseyClaim]:
    """Path/cycle values implied by verified cycle-cycle results.

    Each base entry R(C^k_n, C^k_m) = (k-1)n + floor((m-1)/2) yields
    R(P_n, C_m), R(P_n, P_{m-1}) and, on the diagonal, R(P_n, P_n).  When
    the base covers every n in [m, 2m] for some m and k >= 4, the
    cycle-cycle formula extends to all larger n ("theorem-extended") up to
    `extend_to`.
    """
    claims: List[RamseyClaim] = []
    for (n, m), value in sorted(base.items()):
        expect = (k - 1) * n + (m - 1) // 2
        if value != expect:
            raise ValueError(
                f"inconsistent-base: R(C^{k}_{n},C^{k}_{m}) = {value}, "
                f"formula gives {expect}")
        src = f"base R(C^{k}_{n},C^{k}_{m}) = {value}"
        pc = (k - 1) * n + (m + 1) // 2
        claims.append(RamseyClaim(k, (PATH, n), (CYCLE, m), pc, pc, pc,
                                  "theorem-derived", (src,)))
        pp = (k - 1) * n + m // 2
        claims.append(RamseyClaim(k, (PATH, n), (PATH, m - 1), pp, pp, pp,
                                  "theorem-derived", (src,)))
        if n == m:
            diag = (k - 1) * n + (n + 1) // 2
            claims.append(RamseyClaim(k, (PATH, n), (PATH, n), diag, diag, diag,
                                      "theorem-derived", (src,)))
    if extend_to is not None and k >= 4:
        ms = {m for (_, m) in base}
        for m in sorted(ms):
            if all((n, m) in base for n in range(m, 2 * m + 1)):
                src = (f"base covers R(C^{k}_n,C^{k}_{m}) for all n in "
                       f"[{m},{2 * m}]")
                for n in range(2 * m + 1, extend_to + 1):
                    cc = (k - 1) * n + (m - 1) // 2
                    claims.append(RamseyClaim(k, (CYCLE, n), (CYCLE, m), cc,
                                              cc, cc, "theorem-extended", (src,)))
    return claims


# ---------------------------------------------------------------------------
# certificate verification
# ---------------------------------------------------------------------------

def verify_certificate(cert) -> Tuple[bool, dict]:
    """Re-validate a certificate via embedder primitives only.

    Accepts a Certificate object or its JSON dict form.  Returns (ok,
    report); structural problems raise `malformed-certificate` errors while
    semantic failures come back as ok=False with machine-readable reasons.
    """
    from .certificates import Certificate
    from .embedder import Embedding, verify_embedding

    if isinstance(cert, dict):
        cert = Certificate.from_json_obj(cert)
    if not isinstance(cert, Certificate):
        raise ValueError("malformed-certificate: not a certificate")
    c = cert.coloring
    payload = cert.payload
    reasons: List[str] = []
    report: dict = {"type": cert.type, "reasons": reasons}

    def need(key):
        if key not in payload:
            raise ValueError(f"malformed-certificate: missing payload key {key!r}")
        return payload[key]

    if cert.type == "witness-coloring":
        red = _template_of(c.k, (need("red_target")["kind"],
                                 need("red_target")["length"]))
        blue = _template_of(c.k, (need("blue_target")["kind"],
                                  need("blue_target")["length"]))
        if int(need("n_vertices")) != c.n_vertices:
            reasons.append("host-size-mismatch")
        hit = find_embedding(c, "red", red)
        if hit is not None:
            reasons.append("red-copy-found")
            report["red_copy"] = hit.to_json_obj()
        hit = find_embedding(c, "blue", blue)
        if hit is not None:
            reasons.append("blue-copy-found")
            report["blue_copy"] = hit.to_json_obj()
    elif cert.type == "embedding":
        emb = Embedding.from_json_obj(need("embedding"))
        res = verify_embedding(c, emb)
        if not res:
            reasons.append(res.reason)
    elif cert.type == "pair-set":
        from .constructive import BichromaticPair
        pairs = [BichromaticPair.from_json_obj(o) for o in need("pairs")]
        for i, p in enumerate(pairs):
            ok, why = p.validate(c)
            if not ok:
                reasons.append(f"pair-{i}:{why}")
        if payload.get("disjoint") and len(pairs) == 2:
            if pairs[0].union & pairs[1].union:
                reasons.append("pairs-not-disjoint")
    elif cert.type == "join-trace":
        for i, step in enumerate(need("steps")):
            e = tuple(sorted(step["edge"]))
            want = step["color"]
            if c.color_of(e) != want:
                reasons.append("edge-color-mismatch")
                report.setdefault("bad_steps", []).append(i)
        if "result" in payload and payload["result"] is not None:
            emb = Embedding.from_json_obj(payload["result"])
            res = verify_embedding(c, emb)
            if not res:
                reasons.append(f"result:{res.reason}")
    elif cert.type == "configuration":
        from .constructive import GoodConfiguration, validate_good_configuration
        cfg = GoodConfiguration.from_json_obj(need("configuration"))
        res = validate_good_configuration(c, cfg)
        if not res[0]:
            reasons.append(res[1])
    else:
        raise ValueError(f"malformed-certificate: unknown type {cert.type!r}")

    return (not reasons), report
