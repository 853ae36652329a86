"""Scenario files: JSON descriptions of a torus, an endomorphism, and extras.

Matrices are row-major arrays of integer strings and rationals are "p/q"
strings, so arbitrarily large values survive the trip through JSON.  A
small library of builtin scenarios ships with the package; every type
invariant is re-validated on load with field-level error messages.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .lattice import (
    ComplexTorus,
    LatticeEndomorphism,
    SimpleFactorSpec,
    TorsionPoint,
    is_analytic,
)
from .linalg import IntegerMatrix, RationalMatrix
from .quotient import AffineAutomorphism, GroupAction


class ScenarioError(ValueError):
    """Scenario file violates the schema; message names the offending field."""


@dataclass(frozen=True)
class SubvarietySpec:
    """Invariant subtorus data: saturated basis, periodic translate, period."""

    basis: IntegerMatrix
    translate: TorsionPoint
    period: int

    def __post_init__(self):
        if self.period < 1:
            raise ValueError("period must be >= 1")


@dataclass(frozen=True)
class Scenario:
    name: str
    torus: ComplexTorus
    endomorphism: LatticeEndomorphism
    analytic: bool = False
    factors: tuple[SimpleFactorSpec, ...] | None = None
    action: GroupAction | None = None
    subvariety: SubvarietySpec | None = None

    def __post_init__(self):
        if self.torus.rank != self.endomorphism.rank:
            raise ValueError("endomorphism dimension does not match the torus")
        if self.analytic and not is_analytic(self.endomorphism, self.torus):
            raise ValueError(
                "endomorphism declared analytic but M J != J M"
            )
        if self.action is not None and self.action.rank != self.torus.rank:
            raise ValueError("group action dimension does not match the torus")
        if self.subvariety is not None:
            if self.subvariety.basis.rows != self.torus.rank:
                raise ValueError("subvariety basis rows do not match the torus")
            if len(self.subvariety.translate) != self.torus.rank:
                raise ValueError("subvariety translate does not match the torus")


# ---------------------------------------------------------------------------
# parsing


def _parse_int(value, where: str) -> int:
    if isinstance(value, bool):
        raise ScenarioError(f"{where}: expected an integer, got a boolean")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value, 10)
        except ValueError:
            raise ScenarioError(f"{where}: invalid integer {value!r}") from None
    raise ScenarioError(f"{where}: expected an integer string, got {type(value).__name__}")


def _parse_fraction(value, where: str) -> Fraction:
    if isinstance(value, bool):
        raise ScenarioError(f"{where}: expected a rational, got a boolean")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise ScenarioError(f"{where}: invalid rational {value!r}") from None
    raise ScenarioError(f"{where}: expected a 'p/q' string, got {type(value).__name__}")


def _parse_rows(value, where: str, rows: int, cols: int) -> list[list]:
    if not isinstance(value, list) or len(value) != rows:
        raise ScenarioError(f"{where}: expected {rows} rows")
    table = []
    for i, row in enumerate(value):
        if not isinstance(row, list) or len(row) != cols:
            raise ScenarioError(f"{where}[{i}]: expected {cols} entries")
        table.append(row)
    return table


def _parse_integer_matrix(value, where: str, rows: int, cols: int) -> IntegerMatrix:
    table = _parse_rows(value, where, rows, cols)
    return IntegerMatrix.from_rows(
        [
            [_parse_int(x, f"{where}[{i}][{j}]") for j, x in enumerate(row)]
            for i, row in enumerate(table)
        ]
    )


def _parse_rational_matrix(value, where: str, rows: int, cols: int) -> RationalMatrix:
    table = _parse_rows(value, where, rows, cols)
    return RationalMatrix.from_rows(
        [
            [_parse_fraction(x, f"{where}[{i}][{j}]") for j, x in enumerate(row)]
            for i, row in enumerate(table)
        ]
    )


def _parse_vector(value, where: str, length: int) -> tuple[Fraction, ...]:
    if not isinstance(value, list) or len(value) != length:
        raise ScenarioError(f"{where}: expected a vector of length {length}")
    return tuple(_parse_fraction(x, f"{where}[{i}]") for i, x in enumerate(value))


def scenario_from_dict(data: dict) -> Scenario:
    """Build and validate a Scenario from parsed JSON."""
    if not isinstance(data, dict):
        raise ScenarioError("top level: expected an object")
    name = data.get("name")
    if not isinstance(name, str) or not name:
        raise ScenarioError("name: expected a nonempty string")

    torus_data = data.get("torus")
    if not isinstance(torus_data, dict):
        raise ScenarioError("torus: expected an object")
    g = _parse_int(torus_data.get("g"), "torus.g")
    if g < 1:
        raise ScenarioError("torus.g: must be >= 1")
    n = 2 * g
    J = None
    if torus_data.get("J") is not None:
        J = _parse_rational_matrix(torus_data["J"], "torus.J", n, n)
    S = None
    if torus_data.get("S") is not None:
        S = _parse_integer_matrix(torus_data["S"], "torus.S", n, n)
    try:
        torus = ComplexTorus(g, complex_structure=J, riemann_form=S)
    except ValueError as exc:
        raise ScenarioError(f"torus: {exc}") from exc

    endo_data = data.get("endomorphism")
    if not isinstance(endo_data, dict):
        raise ScenarioError("endomorphism: expected an object")
    matrix = _parse_integer_matrix(endo_data.get("M"), "endomorphism.M", n, n)
    translation = (Fraction(0),) * n
    if endo_data.get("t") is not None:
        translation = _parse_vector(endo_data["t"], "endomorphism.t", n)
    analytic = endo_data.get("analytic", False)
    if not isinstance(analytic, bool):
        raise ScenarioError("endomorphism.analytic: expected a boolean")
    endo = LatticeEndomorphism(matrix, translation)

    factors = None
    if data.get("factors") is not None:
        if not isinstance(data["factors"], list) or not data["factors"]:
            raise ScenarioError("factors: expected a nonempty list")
        parsed = []
        for i, item in enumerate(data["factors"]):
            if not isinstance(item, dict):
                raise ScenarioError(f"factors[{i}]: expected an object")
            try:
                parsed.append(
                    SimpleFactorSpec(
                        g=_parse_int(item.get("g"), f"factors[{i}].g"),
                        q=_parse_int(item.get("q"), f"factors[{i}].q"),
                        multiplicity=_parse_int(item.get("r", 1), f"factors[{i}].r"),
                    )
                )
            except ValueError as exc:
                raise ScenarioError(f"factors[{i}]: {exc}") from exc
        factors = tuple(parsed)

    action = None
    if data.get("action") is not None:
        if not isinstance(data["action"], list) or not data["action"]:
            raise ScenarioError("action: expected a nonempty list")
        elements = []
        for i, item in enumerate(data["action"]):
            if not isinstance(item, dict):
                raise ScenarioError(f"action[{i}]: expected an object")
            linear = _parse_integer_matrix(item.get("U"), f"action[{i}].U", n, n)
            shift = (Fraction(0),) * n
            if item.get("s") is not None:
                shift = _parse_vector(item["s"], f"action[{i}].s", n)
            try:
                elements.append(AffineAutomorphism(linear, shift))
            except ValueError as exc:
                raise ScenarioError(f"action[{i}]: {exc}") from exc
        action = GroupAction(tuple(elements))

    subvariety = None
    if data.get("subvariety") is not None:
        sub = data["subvariety"]
        if not isinstance(sub, dict):
            raise ScenarioError("subvariety: expected an object")
        basis_rows = sub.get("basis")
        if not isinstance(basis_rows, list) or not basis_rows:
            raise ScenarioError("subvariety.basis: expected a matrix")
        first = basis_rows[0]
        if not isinstance(first, list) or not first:
            raise ScenarioError("subvariety.basis: expected a matrix")
        basis = _parse_integer_matrix(
            basis_rows, "subvariety.basis", n, len(first)
        )
        translate = TorsionPoint.reduce(
            _parse_vector(sub.get("translate", ["0"] * n), "subvariety.translate", n)
        )
        period = _parse_int(sub.get("period", 1), "subvariety.period")
        try:
            subvariety = SubvarietySpec(basis=basis, translate=translate, period=period)
        except ValueError as exc:
            raise ScenarioError(f"subvariety: {exc}") from exc

    try:
        return Scenario(
            name=name,
            torus=torus,
            endomorphism=endo,
            analytic=analytic,
            factors=factors,
            action=action,
            subvariety=subvariety,
        )
    except ValueError as exc:
        raise ScenarioError(str(exc)) from exc


def scenario_to_dict(scenario: Scenario) -> dict:
    """Lossless JSON form: integers and rationals rendered as strings."""

    def int_matrix(m: IntegerMatrix) -> list[list[str]]:
        return [[str(x) for x in m.row(i)] for i in range(m.rows)]

    def rat_matrix(m: RationalMatrix) -> list[list[str]]:
        return [[str(x) for x in m.row(i)] for i in range(m.rows)]

    def vector(v) -> list[str]:
        return [str(x) for x in v]

    torus: dict = {"g": str(scenario.torus.g)}
    if scenario.torus.complex_structure is not None:
        torus["J"] = rat_matrix(scenario.torus.complex_structure)
    if scenario.torus.riemann_form is not None:
        torus["S"] = int_matrix(scenario.torus.riemann_form)
    endo: dict = {
        "M": int_matrix(scenario.endomorphism.matrix),
        "t": vector(scenario.endomorphism.translation),
    }
    if scenario.analytic:
        endo["analytic"] = True
    data: dict = {"name": scenario.name, "torus": torus, "endomorphism": endo}
    if scenario.factors is not None:
        data["factors"] = [
            {"g": str(f.g), "q": str(f.q), "r": str(f.multiplicity)}
            for f in scenario.factors
        ]
    if scenario.action is not None:
        data["action"] = [
            {"U": int_matrix(e.linear), "s": vector(e.translation)}
            for e in scenario.action.elements
        ]
    if scenario.subvariety is not None:
        data["subvariety"] = {
            "basis": int_matrix(scenario.subvariety.basis),
            "translate": vector(scenario.subvariety.translate.coordinates),
            "period": str(scenario.subvariety.period),
        }
    return data


def load_scenario_file(path: str | Path) -> Scenario:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario file is not valid JSON: {exc}") from exc
    return scenario_from_dict(data)


def save_scenario_file(scenario: Scenario, path: str | Path) -> None:
    Path(path).write_text(json.dumps(scenario_to_dict(scenario), indent=2) + "\n")


# ---------------------------------------------------------------------------
# builtin library

J_BLOCK = RationalMatrix.from_rows([[0, -1], [1, 0]])
S_BLOCK = IntegerMatrix.from_rows([[0, -1], [1, 0]])


def _cm_torus(g: int) -> ComplexTorus:
    """Product of g square CM elliptic curves with the product Riemann form."""
    n = 2 * g
    rows = [[Fraction(0)] * n for _ in range(n)]
    for b in range(g):
        rows[2 * b][2 * b + 1] = Fraction(-1)
        rows[2 * b + 1][2 * b] = Fraction(1)
    J = RationalMatrix.from_rows(rows)
    S = IntegerMatrix.block_diagonal([S_BLOCK] * g)
    return ComplexTorus(g, complex_structure=J, riemann_form=S)


def multiplication_scenario(m: int, g: int = 1) -> Scenario:
    if m < 2:
        raise ScenarioError("mult-by-m needs m >= 2")
    if g < 1:
        raise ScenarioError("mult-by-m needs g >= 1")
    torus = _cm_torus(g)
    endo = LatticeEndomorphism.multiplication_by(m, g)
    name = f"mult-by-{m}" if g == 1 else f"mult-by-{m}-g{g}"
    return Scenario(
        name=name,
        torus=torus,
        endomorphism=endo,
        analytic=True,
        factors=(SimpleFactorSpec(g=1, q=m * m, multiplicity=g),),
    )


def gaussian_cm_scenario() -> Scenario:
    """Multiplication by 1+i on the square CM curve; degree 2, multiplier 2."""
    torus = _cm_torus(1)
    endo = LatticeEndomorphism(IntegerMatrix.from_rows([[1, -1], [1, 1]]))
    return Scenario(
        name="gaussian-cm",
        torus=torus,
        endomorphism=endo,
        analytic=True,
        factors=(SimpleFactorSpec(g=1, q=2),),
    )


def sum_difference_scenario() -> Scenario:
    """(x, y) -> (x + y, x - y) on E x E; degree 4, multiplier 2."""
    torus = _cm_torus(2)
    matrix = IntegerMatrix.from_rows(
        [
            [1, 0, 1, 0],
            [0, 1, 0, 1],
            [1, 0, -1, 0],
            [0, 1, 0, -1],
        ]
    )
    return Scenario(
        name="silverman-sumdiff",
        torus=torus,
        endomorphism=LatticeEndomorphism(matrix),
        analytic=True,
    )


def unpolarizable_scenario() -> Scenario:
    """[1] x [4] on a surface times a curve: degree 16, no global multiplier."""
    torus = _cm_torus(3)
    matrix = IntegerMatrix.diagonal([1, 1, 1, 1, 4, 4])
    return Scenario(
        name="unpolarizable-1x4",
        torus=torus,
        endomorphism=LatticeEndomorphism(matrix),
        analytic=True,
    )


def bielliptic_scenario() -> Scenario:
    """[3] on E x E with a free order-2 affine action (bielliptic shape)."""
    torus = _cm_torus(2)
    endo = LatticeEndomorphism.multiplication_by(3, 2)
    involution = AffineAutomorphism(
        IntegerMatrix.diagonal([1, 1, -1, -1]),
        (Fraction(1, 2), Fraction(0), Fraction(0), Fraction(0)),
    )
    action = GroupAction((AffineAutomorphism.identity(4), involution))
    return Scenario(
        name="bielliptic-quotient",
        torus=torus,
        endomorphism=endo,
        analytic=True,
        action=action,
        factors=(SimpleFactorSpec(g=1, q=9, multiplicity=2),),
    )


def diagonal_subvariety_scenario() -> Scenario:
    """[2] x [2] on E x E restricted to the diagonal elliptic curve."""
    torus = _cm_torus(2)
    endo = LatticeEndomorphism.multiplication_by(2, 2)
    basis = IntegerMatrix.from_rows([[1, 0], [0, 1], [1, 0], [0, 1]])
    translate = TorsionPoint.reduce([0, 0, 0, 0])
    return Scenario(
        name="diagonal-subvariety",
        torus=torus,
        endomorphism=endo,
        analytic=True,
        factors=(SimpleFactorSpec(g=1, q=4, multiplicity=2),),
        subvariety=SubvarietySpec(basis=basis, translate=translate, period=1),
    )


BUILTIN_FACTORIES = {
    "gaussian-cm": gaussian_cm_scenario,
    "silverman-sumdiff": sum_difference_scenario,
    "unpolarizable-1x4": unpolarizable_scenario,
    "bielliptic-quotient": bielliptic_scenario,
    "diagonal-subvariety": diagonal_subvariety_scenario,
}

BUILTIN_DESCRIPTIONS = {
    "mult-by-<m>[-g<G>]": "multiplication by m on a product of G CM curves (q = m^2)",
    "gaussian-cm": "multiplication by 1+i on the square CM curve (degree 2, q = 2)",
    "silverman-sumdiff": "sum/difference map on E x E (degree 4, q = 2)",
    "unpolarizable-1x4": "[1] x [4] on surface x curve (degree 16, no multiplier)",
    "bielliptic-quotient": "[3] on E x E with a free order-2 affine action",
    "diagonal-subvariety": "[2] x [2] on E x E restricted to the diagonal curve",
}

_MULT_PATTERN = re.compile(r"^mult-by-(\d+)(?:-g(\d+))?$")


def builtin_scenarios() -> list[Scenario]:
    """One representative per builtin family (mult-by-m shown for m=2, g=1)."""
    out = [multiplication_scenario(2)]
    out.extend(factory() for factory in BUILTIN_FACTORIES.values())
    return out


def resolve_scenario(ref: str) -> Scenario:
    """Builtin name or path to a JSON scenario file."""
    match = _MULT_PATTERN.match(ref)
    if match:
        m = int(match.group(1))
        g = int(match.group(2)) if match.group(2) else 1
        return multiplication_scenario(m, g)
    if ref in BUILTIN_FACTORIES:
        return BUILTIN_FACTORIES[ref]()
    if Path(ref).exists():
        return load_scenario_file(ref)
    raise ScenarioError(
        f"unknown scenario {ref!r}: not a builtin name and no such file"
    )
