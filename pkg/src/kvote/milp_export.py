"""Solver-agnostic MILP builders for the four exact formulations, an
internal point-evaluator, and a deterministic LP-format writer.

Formulation kinds:

  cover_z     exponential family over voter subsets, with per-voter
              disagreement variables z_ij (two bounding rows each);
  cover_x     exponential family written on the committee variables only;
  k_centrum   compact formulation with objective k*t + sum_i v_i;
  assignment  compact formulation with objective sum_i u_i + sum_h v_h.

Models are built and exported, never solved here; `evaluate_at` checks a
committee against a model by closed-form minimal auxiliary assignments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Optional, Sequence

from .errors import InvalidArgumentError, ResourceLimitError
from .model import Committee, Instance, distances, subset_counts

__all__ = [
    "Variable",
    "Constraint",
    "LinearModel",
    "FormulationKind",
    "CutPolicy",
    "build",
    "evaluate_at",
    "write_lp",
    "DEFAULT_SUBSET_BUDGET",
]

DEFAULT_SUBSET_BUDGET = 10**5

COVER_Z = "cover_z"
COVER_X = "cover_x"
K_CENTRUM = "k_centrum"
ASSIGNMENT = "assignment"
KINDS = (COVER_Z, COVER_X, K_CENTRUM, ASSIGNMENT)

FULL_ENUMERATION = "full"
SEED_ONLY = "seed_only"


@dataclass(frozen=True)
class Variable:
    name: str
    lower: Optional[int]  # None = -inf
    upper: Optional[int]  # None = +inf
    is_integer: bool


@dataclass(frozen=True)
class Constraint:
    name: str
    coefficients: dict[str, int]  # variable name -> integer coefficient
    sense: str  # "<=", ">=", "=="
    rhs: int


@dataclass
class LinearModel:
    """Variables, linear constraints, and a minimize objective.

    `meta` carries the originating instance and formulation parameters
    for the internal evaluator; it is not serialized.
    """

    variables: list[Variable]
    objective: dict[str, int]  # minimize
    constraints: list[Constraint]
    meta: dict = field(default_factory=dict, repr=False)

    def variable_names(self) -> set[str]:
        return {v.name for v in self.variables}

    def validate(self) -> None:
        names = [v.name for v in self.variables]
        if len(names) != len(set(names)):
            raise InvalidArgumentError("duplicate variable names")
        declared = set(names)
        for c in self.constraints:
            unknown = set(c.coefficients) - declared
            if unknown:
                raise InvalidArgumentError(
                    f"constraint {c.name} references undeclared variables {sorted(unknown)}"
                )
        if set(self.objective) - declared:
            raise InvalidArgumentError("objective references undeclared variables")


@dataclass(frozen=True)
class FormulationKind:
    kind: str
    cut_policy: str = FULL_ENUMERATION  # cover kinds only

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidArgumentError(f"unknown formulation kind {self.kind!r}")
        if self.cut_policy not in (FULL_ENUMERATION, SEED_ONLY):
            raise InvalidArgumentError(f"unknown cut policy {self.cut_policy!r}")


CutPolicy = str  # FULL_ENUMERATION | SEED_ONLY


def _x(j: int) -> str:
    return f"x_{j + 1}"


def _z(i: int, j: int) -> str:
    return f"z_{i + 1}_{j + 1}"


def _d(i: int) -> str:
    return f"d_{i + 1}"


def _subsets(n: int, k: int, budget: int):
    count = math.comb(n, k)
    if count > budget:
        raise ResourceLimitError(
            f"C({n},{k}) = {count} subset constraints exceed the budget {budget}"
        )
    return combinations(range(n), k)


def _xor_row(p_ij: int, j: int, z_name: str) -> Constraint:
    # z_ij >= x_j(1-p_ij) + p_ij(1-x_j)  <=>  z_ij - (1-2p_ij) x_j >= p_ij
    return Constraint(
        name=z_name + "_xor",
        coefficients={z_name: 1, _x(j): -(1 - 2 * p_ij)},
        sense=">=",
        rhs=p_ij,
    )


def build(
    instance: Instance,
    k: int,
    kind: FormulationKind,
    committee_size: Optional[int] = None,
    subset_budget: int = DEFAULT_SUBSET_BUDGET,
) -> LinearModel:
    """Assemble the chosen formulation for the top-k objective.

    A committee-size cap appends sum_j x_j <= committee_size.
    """
    if not 1 <= k <= instance.n:
        raise InvalidArgumentError(f"k={k} out of range [1, {instance.n}]")
    if committee_size is not None and not 0 <= committee_size <= instance.m:
        raise InvalidArgumentError(
            f"committee size {committee_size} out of range [0, {instance.m}]"
        )
    n, m = instance.n, instance.m
    P = [instance.profile_bits(i) for i in range(n)]

    variables: list[Variable] = [Variable(_x(j), 0, 1, True) for j in range(m)]
    constraints: list[Constraint] = []
    objective: dict[str, int]

    if kind.kind == COVER_Z:
        variables += [Variable(_z(i, j), 0, None, False) for i in range(n) for j in range(m)]
        variables.append(Variable("v", 0, None, False))
        objective = {"v": 1}
        for i in range(n):
            for j in range(m):
                # z_ij >= p_ij (1 - x_j)   and   z_ij >= (1 - p_ij) x_j
                constraints.append(
                    Constraint(
                        name=_z(i, j) + "_a",
                        coefficients={_z(i, j): 1, _x(j): P[i][j]},
                        sense=">=",
                        rhs=P[i][j],
                    )
                )
                constraints.append(
                    Constraint(
                        name=_z(i, j) + "_b",
                        coefficients={_z(i, j): 1, _x(j): -(1 - P[i][j])},
                        sense=">=",
                        rhs=0,
                    )
                )
        if kind.cut_policy == FULL_ENUMERATION:
            for s_idx, S in enumerate(_subsets(n, k, subset_budget)):
                coefs = {"v": -1}
                for i in S:
                    for j in range(m):
                        coefs[_z(i, j)] = 1
                constraints.append(
                    Constraint(name=f"cover_{s_idx + 1}", coefficients=coefs, sense="<=", rhs=0)
                )

    elif kind.kind == COVER_X:
        variables.append(Variable("v", 0, None, False))
        objective = {"v": 1}
        if kind.cut_policy == FULL_ENUMERATION:
            for s_idx, S in enumerate(_subsets(n, k, subset_budget)):
                g = subset_counts(instance, S)
                # sum_j g_j (1-x_j) + sum_j (k-g_j) x_j <= v
                coefs = {"v": -1}
                for j in range(m):
                    if k - 2 * g[j] != 0:
                        coefs[_x(j)] = k - 2 * g[j]
                constraints.append(
                    Constraint(
                        name=f"cover_{s_idx + 1}",
                        coefficients=coefs,
                        sense="<=",
                        rhs=-sum(g),
                    )
                )

    elif kind.kind == K_CENTRUM:
        variables += [Variable(_z(i, j), 0, None, False) for i in range(n) for j in range(m)]
        variables += [Variable(_d(i), 0, None, False) for i in range(n)]
        variables += [Variable(f"vi_{i + 1}", 0, None, False) for i in range(n)]
        variables.append(Variable("t", 0, None, False))
        objective = {"t": k, **{f"vi_{i + 1}": 1 for i in range(n)}}
        for i in range(n):
            for j in range(m):
                constraints.append(_xor_row(P[i][j], j, _z(i, j)))
        for i in range(n):
            constraints.append(
                Constraint(
                    name=_d(i) + "_sum",
                    coefficients={_d(i): 1, **{_z(i, j): -1 for j in range(m)}},
                    sense=">=",
                    rhs=0,
                )
            )
        for i in range(n):
            # v_i >= d_i - t
            constraints.append(
                Constraint(
                    name=f"vi_{i + 1}_excess",
                    coefficients={f"vi_{i + 1}": 1, _d(i): -1, "t": 1},
                    sense=">=",
                    rhs=0,
                )
            )

    else:  # ASSIGNMENT
        variables += [Variable(_z(i, j), 0, None, False) for i in range(n) for j in range(m)]
        variables += [Variable(_d(i), 0, None, False) for i in range(n)]
        variables += [Variable(f"u_{i + 1}", 0, None, False) for i in range(n)]
        variables += [Variable(f"vh_{h + 1}", 0, None, False) for h in range(k)]
        objective = {
            **{f"u_{i + 1}": 1 for i in range(n)},
            **{f"vh_{h + 1}": 1 for h in range(k)},
        }
        for i in range(n):
            for h in range(k):
                # u_i + v_h >= d_i
                constraints.append(
                    Constraint(
                        name=f"assign_{i + 1}_{h + 1}",
                        coefficients={f"u_{i + 1}": 1, f"vh_{h + 1}": 1, _d(i): -1},
                        sense=">=",
                        rhs=0,
                    )
                )
        for i in range(n):
            constraints.append(
                Constraint(
                    name=_d(i) + "_sum",
                    coefficients={_d(i): 1, **{_z(i, j): -1 for j in range(m)}},
                    sense=">=",
                    rhs=0,
                )
            )
        for i in range(n):
            for j in range(m):
                constraints.append(_xor_row(P[i][j], j, _z(i, j)))

    if committee_size is not None:
        constraints.append(
            Constraint(
                name="committee_size",
                coefficients={_x(j): 1 for j in range(m)},
                sense="<=",
                rhs=committee_size,
            )
        )

    model = LinearModel(
        variables=variables,
        objective=objective,
        constraints=constraints,
        meta={
            "kind": kind.kind,
            "cut_policy": kind.cut_policy,
            "k": k,
            "instance": instance,
            "committee_size": committee_size,
        },
    )
    model.validate()
    return model


def _point_satisfies(model: LinearModel, point: dict[str, int]) -> bool:
    for var in model.variables:
        val = point[var.name]
        if var.lower is not None and val < var.lower:
            return False
        if var.upper is not None and val > var.upper:
            return False
        if var.is_integer and not float(val).is_integer():
            return False
    for c in model.constraints:
        lhs = sum(coef * point[name] for name, coef in c.coefficients.items())
        if c.sense == "<=" and not lhs <= c.rhs:
            return False
        if c.sense == ">=" and not lhs >= c.rhs:
            return False
        if c.sense == "==" and lhs != c.rhs:
            return False
    return True


def evaluate_at(model: LinearModel, x_star: Committee) -> tuple[bool, int]:
    """Fix the committee variables and give every auxiliary variable its
    minimal feasible value, then report (feasible, objective).

    Minimal assignments: z_ij = |p_ij - x_j|; d_i = the exact distances;
    cover v = max constraint left-hand side over included subsets;
    k-centrum t = k-th largest distance, v_i = max(d_i - t, 0);
    assignment v_h = k-th largest distance for every h, u_i = max(d_i - v_h, 0).
    """
    instance: Instance = model.meta["instance"]
    k: int = model.meta["k"]
    kind: str = model.meta["kind"]
    if x_star.m != instance.m:
        raise InvalidArgumentError(
            f"committee length {x_star.m} != instance m {instance.m}"
        )
    n, m = instance.n, instance.m
    bits = x_star.bits
    d = list(distances(instance, x_star))
    d_sorted = sorted(d, reverse=True)
    kth = d_sorted[k - 1]

    point: dict[str, int] = {_x(j): bits[j] for j in range(m)}
    if kind in (COVER_Z, K_CENTRUM, ASSIGNMENT):
        for i in range(n):
            p = instance.profile_bits(i)
            for j in range(m):
                point[_z(i, j)] = abs(p[j] - bits[j])
    if kind in (K_CENTRUM, ASSIGNMENT):
        for i in range(n):
            point[_d(i)] = d[i]

    if kind in (COVER_Z, COVER_X):
        v = 0
        for c in model.constraints:
            if not c.name.startswith("cover_"):
                continue
            lhs_rest = sum(
                coef * point[name]
                for name, coef in c.coefficients.items()
                if name != "v"
            )
            v = max(v, lhs_rest - c.rhs)  # need lhs_rest - v <= rhs
        point["v"] = v
    elif kind == K_CENTRUM:
        point["t"] = kth
        for i in range(n):
            point[f"vi_{i + 1}"] = max(d[i] - kth, 0)
    else:
        for h in range(k):
            point[f"vh_{h + 1}"] = kth
        for i in range(n):
            point[f"u_{i + 1}"] = max(d[i] - kth, 0)

    feasible = _point_satisfies(model, point)
    objective = sum(coef * point[name] for name, coef in model.objective.items())
    return feasible, objective


def _term(coef: int, name: str, first: bool) -> str:
    sign = "-" if coef < 0 else ("" if first else "+")
    mag = abs(coef)
    body = name if mag == 1 else f"{mag} {name}"
    return f"{sign} {body}" if (sign and not first) else f"{sign}{body}"


def _expr(coefs: dict[str, int], order: dict[str, int]) -> str:
    items = sorted(coefs.items(), key=lambda kv: order[kv[0]])
    parts = []
    for idx, (name, coef) in enumerate(items):
        if coef == 0:
            continue
        parts.append(_term(coef, name, first=not parts))
    return " ".join(parts) if parts else "0"


def write_lp(model: LinearModel, path) -> str:
    """Write the model as deterministic LP-style text; returns the text.

    Sections: Minimize / Subject To / Bounds / Binaries / End.  Variable
    and constraint order follow declaration order; integer coefficients
    are printed without a decimal point, so identical models produce
    byte-identical files.
    """
    model.validate()
    order = {v.name: i for i, v in enumerate(model.variables)}
    lines = ["Minimize", f" obj: {_expr(model.objective, order)}", "Subject To"]
    senses = {"<=": "<=", ">=": ">=", "==": "="}
    for c in model.constraints:
        lines.append(f" {c.name}: {_expr(c.coefficients, order)} {senses[c.sense]} {c.rhs}")
    lines.append("Bounds")
    for v in model.variables:
        if v.is_integer and v.lower == 0 and v.upper == 1:
            continue  # binaries are declared below
        lo = "-inf" if v.lower is None else str(v.lower)
        hi = "+inf" if v.upper is None else str(v.upper)
        lines.append(f" {lo} <= {v.name} <= {hi}")
    binaries = [v.name for v in model.variables if v.is_integer and v.lower == 0 and v.upper == 1]
    if binaries:
        lines.append("Binaries")
        lines.append(" " + " ".join(binaries))
    lines.append("End")
    text = "\n".join(lines) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text
