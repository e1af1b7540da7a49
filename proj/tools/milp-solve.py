#!/usr/bin/env python3
"""MILP solver executable backed by HiGHS.

Speaks the same command-line and file conventions as the `highs` binary for
the subset this project uses:

    milp-solve.py model.lp --options_file opts.txt --solution_file out.sol
                  [--read_solution_file warm.sol] [--plain plain.out]

Two engines:
  * native  — scipy's bundled HiGHS bindings (full option set, native LP
              reader/writer, MIP warm starts).  Used when available.
  * scipy   — scipy.optimize.milp with a built-in LP parser.  Fallback for
              scipy builds that do not expose the bindings.

`--plain FILE` additionally emits a minimal `status/objective/var` listing
for generic exec-style callers.
"""

import argparse
import math
import re
import sys

INF = math.inf
BIG = 1e30  # bounds at or beyond this magnitude are treated as infinite

# ---------------------------------------------------------------------------
# native engine (HiGHS bindings bundled with scipy)
# ---------------------------------------------------------------------------


def try_native_solve(args):
    try:
        import scipy.optimize._highspy._core as core
    except Exception:
        return None

    h = core._Highs()
    if args.options_file:
        h.readOptions(args.options_file)
    status = h.readModel(args.model)
    if status not in (core.HighsStatus.kOk, core.HighsStatus.kWarning):
        print(f"ERROR: cannot read model {args.model}", file=sys.stderr)
        sys.exit(1)
    if args.read_solution_file:
        h.readSolution(args.read_solution_file, 0)
    h.run()

    status_text = h.modelStatusToString(h.getModelStatus())
    info = h.getInfo()
    objective = info.objective_function_value
    have_x = info.primal_solution_status == core.kSolutionStatusFeasible

    if args.solution_file:
        h.writeSolution(args.solution_file, 0)  # raw style
    if args.plain:
        lp = h.getLp()
        values = h.getSolution().col_value if have_x else []
        with open(args.plain, "w", encoding="utf-8") as fh:
            fh.write(f"status {status_text.lower().replace(' ', '_')}\n")
            if have_x:
                fh.write(f"objective {objective:.15g}\n")
                for name, value in zip(lp.col_names_, values):
                    fh.write(f"var {name} {value:.15g}\n")
    return 0


# ---------------------------------------------------------------------------
# scipy.optimize.milp fallback with a small LP reader
# ---------------------------------------------------------------------------

_SECTION = {
    "maximize": "objective",
    "maximise": "objective",
    "max": "objective",
    "minimize": "objective",
    "minimise": "objective",
    "min": "objective",
    "subject to": "constraints",
    "such that": "constraints",
    "st": "constraints",
    "s.t.": "constraints",
    "bounds": "bounds",
    "bound": "bounds",
    "binary": "binary",
    "binaries": "binary",
    "bin": "binary",
    "general": "general",
    "generals": "general",
    "gen": "general",
    "end": "end",
}

_NUM_RE = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eEdD][+-]?\d+)?$")


class LpParseError(Exception):
    pass


def _tokenize(expr):
    expr = re.sub(r"([+\-*])", r" \1 ", expr)
    expr = re.sub(r"(<=|>=|=<|=>|<|>|=)", r" \1 ", expr)
    return expr.split()


def _is_number(tok):
    return bool(_NUM_RE.match(tok))


def _to_float(tok):
    return float(tok.lower().replace("d", "e"))


class LpModel:
    def __init__(self):
        self.var_index = {}
        self.var_names = []
        self.lower = []
        self.upper = []
        self.integer = []
        self.obj = {}
        self.obj_offset = 0.0
        self.maximize = False
        self.rows = []  # (name, {var: coef}, sense, rhs)

    def var(self, name):
        if name not in self.var_index:
            self.var_index[name] = len(self.var_names)
            self.var_names.append(name)
            self.lower.append(0.0)
            self.upper.append(INF)
            self.integer.append(False)
        return self.var_index[name]


def _parse_linear(tokens, model):
    coefs = {}
    constant = 0.0
    sign = 1.0
    pending = None
    for tok in tokens:
        if tok == "+":
            if pending is not None:
                constant += sign * pending
                pending = None
            sign = 1.0
        elif tok == "-":
            if pending is not None:
                constant += sign * pending
                pending = None
            sign = -1.0
        elif tok == "*":
            continue
        elif _is_number(tok):
            if pending is not None:
                constant += sign * pending
            pending = _to_float(tok)
        else:
            idx = model.var(tok)
            coef = sign * (pending if pending is not None else 1.0)
            coefs[idx] = coefs.get(idx, 0.0) + coef
            pending = None
            sign = 1.0
    if pending is not None:
        constant += sign * pending
    return coefs, constant


def _parse_bound_value(tok):
    low = tok.lower().lstrip("+")
    if low in ("-inf", "-infinity"):
        return -INF
    if low in ("inf", "+inf", "infinity", "+infinity"):
        return INF
    v = _to_float(tok)
    if v >= BIG:
        return INF
    if v <= -BIG:
        return -INF
    return v


def _parse_bounds_line(line, model):
    tokens = _tokenize(line)
    if len(tokens) == 2 and tokens[1].lower() == "free":
        idx = model.var(tokens[0])
        model.lower[idx] = -INF
        model.upper[idx] = INF
        return
    rel = [i for i, t in enumerate(tokens) if t in ("<=", ">=", "=", "<", ">")]
    if len(rel) == 2 and tokens[rel[0]] in ("<=", "<") and tokens[rel[1]] in ("<=", "<"):
        lo = _parse_bound_value("".join(tokens[: rel[0]]))
        name = tokens[rel[0] + 1]
        hi = _parse_bound_value("".join(tokens[rel[1] + 1 :]))
        idx = model.var(name)
        model.lower[idx], model.upper[idx] = lo, hi
    elif len(rel) == 1:
        i = rel[0]
        a, b = "".join(tokens[:i]), "".join(tokens[i + 1 :])
        sense = tokens[i]
        if _is_number(a) or a.lstrip("+-").lower() in ("inf", "infinity"):
            idx = model.var(b)
            v = _parse_bound_value(a)
            if sense in ("<=", "<"):
                model.lower[idx] = v
            elif sense in (">=", ">"):
                model.upper[idx] = v
            else:
                model.lower[idx] = model.upper[idx] = v
        else:
            idx = model.var(a)
            v = _parse_bound_value(b)
            if sense in ("<=", "<"):
                model.upper[idx] = v
            elif sense in (">=", ">"):
                model.lower[idx] = v
            else:
                model.lower[idx] = model.upper[idx] = v
    else:
        raise LpParseError(f"unrecognized bounds line: {line}")


def parse_lp(path):
    model = LpModel()
    section = None
    with open(path, "r", encoding="utf-8") as fh:
        raw_lines = fh.readlines()

    obj_tokens = []
    pending_row = None

    def flush_row(tokens):
        if not tokens:
            return
        name = None
        if len(tokens) >= 2 and tokens[0].endswith(":"):
            name = tokens[0][:-1]
            tokens = tokens[1:]
        elif ":" in tokens:
            i = tokens.index(":")
            name = "".join(tokens[:i])
            tokens = tokens[i + 1 :]
        sense_idx = None
        for i, t in enumerate(tokens):
            if t in ("<=", ">=", "=", "<", ">", "=<", "=>"):
                sense_idx = i
                break
        if sense_idx is None:
            raise LpParseError(f"constraint without relational operator: {' '.join(tokens)}")
        sense = {"<": "<=", ">": ">=", "=<": "<=", "=>": ">="}.get(tokens[sense_idx],
                                                                   tokens[sense_idx])
        lhs, lconst = _parse_linear(tokens[:sense_idx], model)
        rhs_coefs, rconst = _parse_linear(tokens[sense_idx + 1 :], model)
        for idx, c in rhs_coefs.items():
            lhs[idx] = lhs.get(idx, 0.0) - c
        if name is None:
            name = f"r{len(model.rows)}"
        model.rows.append((name, lhs, sense, rconst - lconst))

    for raw in raw_lines:
        line = raw.split("\\", 1)[0].strip()
        if not line:
            continue
        key = line.lower()
        if key in _SECTION:
            if pending_row:
                flush_row(pending_row)
                pending_row = None
            section = _SECTION[key]
            if section == "objective":
                model.maximize = key.startswith("max")
            if section == "end":
                break
            continue

        if section == "objective":
            obj_tokens.extend(_tokenize(line))
        elif section == "constraints":
            tokens = _tokenize(line)
            if pending_row and tokens and tokens[0].endswith(":"):
                flush_row(pending_row)
                pending_row = []
            pending_row = (pending_row or []) + tokens
            if any(t in ("<=", ">=", "=", "<", ">", "=<", "=>") for t in pending_row) and \
                    _is_number(pending_row[-1]):
                flush_row(pending_row)
                pending_row = None
        elif section == "bounds":
            _parse_bounds_line(line, model)
        elif section == "binary":
            for tok in line.split():
                idx = model.var(tok)
                model.integer[idx] = True
                model.lower[idx] = max(model.lower[idx], 0.0)
                model.upper[idx] = min(model.upper[idx], 1.0)
        elif section == "general":
            for tok in line.split():
                model.integer[model.var(tok)] = True
        elif section is None:
            raise LpParseError(f"content before any section header: {line}")

    if pending_row:
        flush_row(pending_row)

    if obj_tokens:
        if obj_tokens and obj_tokens[0].endswith(":"):
            obj_tokens = obj_tokens[1:]
        coefs, const = _parse_linear(obj_tokens, model)
        model.obj = coefs
        model.obj_offset = const
    return model


def read_options(path):
    opts = {}
    if not path:
        return opts
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" in line:
                k, v = line.split("=", 1)
            else:
                parts = line.split(None, 1)
                if len(parts) != 2:
                    continue
                k, v = parts
            opts[k.strip()] = v.strip()
    return opts


STATUS_TEXT = {
    0: "Optimal",
    1: "Time limit reached",
    2: "Infeasible",
    3: "Unbounded",
    4: "Unknown",
}


def scipy_solve(args):
    import numpy as np
    from scipy import sparse
    from scipy.optimize import Bounds, LinearConstraint, milp

    try:
        model = parse_lp(args.model)
    except (LpParseError, OSError, ValueError) as exc:
        print(f"ERROR: {exc}", file=sys.stderr)
        return 1

    opts = read_options(args.options_file)
    n = len(model.var_names)
    c = np.zeros(n)
    for idx, v in model.obj.items():
        c[idx] = v
    sign = -1.0 if model.maximize else 1.0
    lo = np.array([m if m != -INF else -np.inf for m in model.lower])
    hi = np.array([m if m != INF else np.inf for m in model.upper])
    integrality = np.array([1 if f else 0 for f in model.integer])

    constraints = []
    if model.rows:
        data, rows_ix, cols_ix, lb, ub = [], [], [], [], []
        for r, (_, coefs, sense, rhs) in enumerate(model.rows):
            for idx, coef in coefs.items():
                rows_ix.append(r)
                cols_ix.append(idx)
                data.append(coef)
            if sense == "<=":
                lb.append(-np.inf)
                ub.append(rhs)
            elif sense == ">=":
                lb.append(rhs)
                ub.append(np.inf)
            else:
                lb.append(rhs)
                ub.append(rhs)
        A = sparse.csc_matrix((data, (rows_ix, cols_ix)), shape=(len(model.rows), n))
        constraints.append(LinearConstraint(A, np.array(lb), np.array(ub)))

    milp_opts = {"presolve": True}
    if "time_limit" in opts:
        milp_opts["time_limit"] = float(opts["time_limit"])
    if "mip_rel_gap" in opts:
        milp_opts["mip_rel_gap"] = float(opts["mip_rel_gap"])

    res = milp(sign * c, constraints=constraints, integrality=integrality,
               bounds=Bounds(lo, hi), options=milp_opts)

    status = STATUS_TEXT.get(res.status, "Unknown")
    have_x = res.x is not None
    objective = model.obj_offset + sign * res.fun if res.fun is not None else None
    gap = getattr(res, "mip_gap", None)
    dual_bound = getattr(res, "mip_dual_bound", None)
    if dual_bound is not None:
        dual_bound = sign * dual_bound

    print("Solving report")
    print(f"  Status            {status}")
    if objective is not None:
        print(f"  Primal bound      {objective:.12g}")
    if dual_bound is not None:
        print(f"  Dual bound        {dual_bound:.12g}")
    if gap is not None:
        print(f"  Gap               {100.0 * gap:.6g}% (tolerance: "
              f"{100.0 * float(opts.get('mip_rel_gap', 1e-4)):.6g}%)")

    if args.solution_file:
        with open(args.solution_file, "w", encoding="utf-8") as fh:
            fh.write("Model status\n")
            fh.write(f"{status}\n\n")
            fh.write("# Primal solution values\n")
            if have_x:
                fh.write("Feasible\n")
                fh.write(f"Objective {objective:.15g}\n")
                fh.write(f"# Columns {len(model.var_names)}\n")
                for name, value in zip(model.var_names, res.x):
                    fh.write(f"{name} {value:.15g}\n")
                fh.write(f"# Rows {len(model.rows)}\n")
                for name, coefs, _, _ in model.rows:
                    act = sum(coef * res.x[idx] for idx, coef in coefs.items())
                    fh.write(f"{name} {act:.15g}\n")
            else:
                fh.write("None\n")
            fh.write("# Dual solution values\nNone\n")
            fh.write("# Basis\nHiGHS v1\nNone\n")

    if args.plain:
        with open(args.plain, "w", encoding="utf-8") as fh:
            fh.write(f"status {status.lower().replace(' ', '_')}\n")
            if have_x:
                fh.write(f"objective {objective:.15g}\n")
                for name, value in zip(model.var_names, res.x):
                    fh.write(f"var {name} {value:.15g}\n")
    return 0


def main(argv):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("model")
    ap.add_argument("--options_file", default=None)
    ap.add_argument("--solution_file", default=None)
    ap.add_argument("--read_solution_file", default=None, help="MIP start")
    ap.add_argument("--plain", default=None,
                    help="also write a plain status/objective/var listing")
    ap.add_argument("--engine", default="auto", choices=["auto", "native", "scipy"])
    ap.add_argument("--random_seed", default=None)  # accepted for CLI parity, unused
    args = ap.parse_args(argv)

    if args.engine in ("auto", "native"):
        result = try_native_solve(args)
        if result is not None:
            return result
        if args.engine == "native":
            print("ERROR: native HiGHS bindings unavailable", file=sys.stderr)
            return 1
    return scipy_solve(args)


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
