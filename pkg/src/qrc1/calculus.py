"""Derivation trees and the checking kernel for the ten-rule calculus.

A `Derivation` is an explicit tree: each node carries a rule tag and the
rule's own parameters (formulas, a variable, a term, a constant), so
checking is syntax-directed with no inference or unification.  `check`
walks the tree depth-first, left to right, verifying every side condition
and premise shape, and returns the unique sequent the tree proves.

The six derived-rule builders at the bottom construct trees out of the
ten primitive rules only; they never extend the trusted kernel.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from .language import (
    All,
    And,
    Const,
    Diam,
    Formula,
    Sequent,
    Signature,
    Term,
    TOP,
    Var,
    freefor,
    fv,
    generalize,
    occurs_const,
    sub,
    well_formed,
    well_formed_term,
)
from . import syntax
from .syntax import SymbolTable

# premise count, formula-parameter names, and extra parameters per rule tag
_RULES: dict[str, tuple[int, tuple[str, ...], frozenset[str]]] = {
    "Top": (0, ("phi",), frozenset()),
    "Refl": (0, ("phi",), frozenset()),
    "AndEl": (0, ("phi", "psi"), frozenset()),
    "AndEr": (0, ("phi", "psi"), frozenset()),
    "AndI": (2, (), frozenset()),
    "Cut": (2, (), frozenset()),
    "Nec": (1, (), frozenset()),
    "Trans": (0, ("phi",), frozenset()),
    "AllIr": (1, (), frozenset({"var"})),
    "AllIl": (1, ("phi",), frozenset({"var", "term"})),
    "TermI": (1, (), frozenset({"var", "term"})),
    "ConstE": (1, ("phi", "psi"), frozenset({"var", "const"})),
}

RULES = tuple(_RULES)

# closed enumeration of check-failure reasons
ILL_FORMED = "ill-formed"
PREMISE_MISMATCH = "premise-mismatch"
VAR_NOT_FRESH = "var-not-fresh"
NOT_FREE_FOR = "not-free-for"
CONST_OCCURS = "const-occurs"

REASONS = (ILL_FORMED, PREMISE_MISMATCH, VAR_NOT_FRESH, NOT_FREE_FOR, CONST_OCCURS)


class CheckError(Exception):
    """A derivation failed to check.

    `path` is the list of premise indices from the root to the failing
    node, `rule` its tag, and `reason` one of `REASONS`.
    """

    def __init__(self, path: tuple[int, ...], rule: str, reason: str, detail: str = ""):
        assert reason in REASONS
        self.path = path
        self.rule = rule
        self.reason = reason
        self.detail = detail
        at = "root" if not path else "node " + ".".join(map(str, path))
        text = f"{reason} in {rule} at {at}"
        if detail:
            text += f": {detail}"
        super().__init__(text)


class ProofFormatError(ValueError):
    """Malformed proof file contents."""


@dataclass(frozen=True)
class Derivation:
    rule: str
    formulas: tuple[Formula, ...] = ()
    var: int | None = None
    term: Term | None = None
    const: str | None = None
    premises: tuple[Derivation, ...] = ()

    def __post_init__(self) -> None:
        if self.rule not in _RULES:
            raise ValueError(f"unknown rule tag {self.rule!r}")
        n_prem, f_names, extras = _RULES[self.rule]
        if len(self.premises) != n_prem:
            raise ValueError(
                f"{self.rule} takes {n_prem} premise(s), got {len(self.premises)}"
            )
        if len(self.formulas) != len(f_names):
            raise ValueError(
                f"{self.rule} takes {len(f_names)} formula parameter(s), "
                f"got {len(self.formulas)}"
            )
        if ("var" in extras) != (self.var is not None):
            raise ValueError(f"{self.rule}: bad variable parameter")
        if ("term" in extras) != (self.term is not None):
            raise ValueError(f"{self.rule}: bad term parameter")
        if ("const" in extras) != (self.const is not None):
            raise ValueError(f"{self.rule}: bad constant parameter")


# -- constructors for the ten primitive rules ------------------------


def ax_top(phi: Formula) -> Derivation:
    """Axiom: phi ~> T"""
    return Derivation("Top", (phi,))


def ax_refl(phi: Formula) -> Derivation:
    """Axiom: phi ~> phi"""
    return Derivation("Refl", (phi,))


def ax_and_left(phi: Formula, psi: Formula) -> Derivation:
    """Axiom: phi & psi ~> phi"""
    return Derivation("AndEl", (phi, psi))


def ax_and_right(phi: Formula, psi: Formula) -> Derivation:
    """Axiom: phi & psi ~> psi"""
    return Derivation("AndEr", (phi, psi))


def ax_trans(phi: Formula) -> Derivation:
    """Axiom: <> <> phi ~> <> phi"""
    return Derivation("Trans", (phi,))


def and_intro(left: Derivation, right: Derivation) -> Derivation:
    """From phi ~> psi and phi ~> chi conclude phi ~> psi & chi."""
    return Derivation("AndI", premises=(left, right))


def cut(first: Derivation, second: Derivation) -> Derivation:
    """From phi ~> psi and psi ~> chi conclude phi ~> chi."""
    return Derivation("Cut", premises=(first, second))


def nec(premise: Derivation) -> Derivation:
    """From phi ~> psi conclude <> phi ~> <> psi."""
    return Derivation("Nec", premises=(premise,))


def all_intro_right(premise: Derivation, x: int) -> Derivation:
    """From phi ~> psi conclude phi ~> A x . psi, provided x is not free in phi."""
    return Derivation("AllIr", var=x, premises=(premise,))


def all_intro_left(phi: Formula, x: int, t: Term, premise: Derivation) -> Derivation:
    """From phi[x:=t] ~> psi conclude A x . phi ~> psi, provided t is free for x in phi."""
    return Derivation("AllIl", (phi,), var=x, term=t, premises=(premise,))


def term_inst(premise: Derivation, x: int, t: Term) -> Derivation:
    """From phi ~> psi conclude phi[x:=t] ~> psi[x:=t], t free for x in both."""
    return Derivation("TermI", var=x, term=t, premises=(premise,))


def const_elim(phi: Formula, psi: Formula, x: int, c: str, premise: Derivation) -> Derivation:
    """From phi[x:=c] ~> psi[x:=c] conclude phi ~> psi, c occurring in neither."""
    return Derivation("ConstE", (phi, psi), var=x, const=c, premises=(premise,))


# -- the checker -----------------------------------------------------


def check(d: Derivation, sig: Signature) -> Sequent:
    """Check a derivation and return the sequent it proves.

    Raises `CheckError` on the first violation encountered depth-first,
    left to right; within a node the order is well-formedness of the
    node's own parameters, then side conditions, then premise shape.
    """
    return _check(d, sig, ())


def conclusion(d: Derivation) -> Sequent:
    """The sequent a derivation proves, without signature checks."""
    return _check(d, None, ())


def _check(d: Derivation, sig: Signature | None, path: tuple[int, ...]) -> Sequent:
    prem = [_check(p, sig, path + (i,)) for i, p in enumerate(d.premises)]

    def fail(reason: str, detail: str = "") -> CheckError:
        return CheckError(path, d.rule, reason, detail)

    if sig is not None:
        for f in d.formulas:
            if not well_formed(f, sig):
                raise fail(ILL_FORMED, "parameter formula not well-formed")
        if d.term is not None and not well_formed_term(d.term, sig):
            raise fail(ILL_FORMED, "parameter term not well-formed")
        if d.const is not None and d.const not in sig.constants:
            raise fail(ILL_FORMED, f"undeclared constant {d.const!r}")

    rule = d.rule
    if rule == "Top":
        return Sequent(d.formulas[0], TOP)
    if rule == "Refl":
        return Sequent(d.formulas[0], d.formulas[0])
    if rule == "AndEl":
        phi, psi = d.formulas
        return Sequent(And(phi, psi), phi)
    if rule == "AndEr":
        phi, psi = d.formulas
        return Sequent(And(phi, psi), psi)
    if rule == "Trans":
        phi = d.formulas[0]
        return Sequent(Diam(Diam(phi)), Diam(phi))
    if rule == "AndI":
        if prem[0].ante != prem[1].ante:
            raise fail(PREMISE_MISMATCH, "premises have different antecedents")
        return Sequent(prem[0].ante, And(prem[0].cons, prem[1].cons))
    if rule == "Cut":
        if prem[0].cons != prem[1].ante:
            raise fail(PREMISE_MISMATCH, "middle formulas differ")
        return Sequent(prem[0].ante, prem[1].cons)
    if rule == "Nec":
        return Sequent(Diam(prem[0].ante), Diam(prem[0].cons))
    if rule == "AllIr":
        if d.var in fv(prem[0].ante):
            raise fail(VAR_NOT_FRESH, "quantified variable free in the antecedent")
        return Sequent(prem[0].ante, All(d.var, prem[0].cons))
    if rule == "AllIl":
        phi = d.formulas[0]
        assert d.var is not None and d.term is not None
        if not freefor(phi, d.var, d.term):
            raise fail(NOT_FREE_FOR, "term not free for the variable")
        if prem[0].ante != sub(phi, d.var, d.term):
            raise fail(PREMISE_MISMATCH, "premise antecedent is not the instance")
        return Sequent(All(d.var, phi), prem[0].cons)
    if rule == "TermI":
        assert d.var is not None and d.term is not None
        if not freefor(prem[0].ante, d.var, d.term):
            raise fail(NOT_FREE_FOR, "term not free for the variable in the antecedent")
        if not freefor(prem[0].cons, d.var, d.term):
            raise fail(NOT_FREE_FOR, "term not free for the variable in the consequent")
        return Sequent(
            sub(prem[0].ante, d.var, d.term), sub(prem[0].cons, d.var, d.term)
        )
    # ConstE
    phi, psi = d.formulas
    assert d.var is not None and d.const is not None
    if occurs_const(d.const, phi):
        raise fail(CONST_OCCURS, "constant occurs in the antecedent")
    if occurs_const(d.const, psi):
        raise fail(CONST_OCCURS, "constant occurs in the consequent")
    c = Const(d.const)
    if prem[0] != Sequent(sub(phi, d.var, c), sub(psi, d.var, c)):
        raise fail(PREMISE_MISMATCH, "premise is not the constant instance")
    return Sequent(phi, psi)


# -- derived rules, built from the primitive ones ---------------------


def all_commute(phi: Formula, x: int, y: int) -> Derivation:
    """A x . A y . phi ~> A y . A x . phi"""
    d = ax_refl(phi)
    d = all_intro_left(phi, y, Var(y), d)
    d = all_intro_left(All(y, phi), x, Var(x), d)
    d = all_intro_right(d, x)
    return all_intro_right(d, y)


def all_instantiate(phi: Formula, x: int, t: Term) -> Derivation:
    """A x . phi ~> phi[x:=t], provided t is free for x in phi."""
    if not freefor(phi, x, t):
        raise ValueError("term is not free for the variable in the formula")
    return all_intro_left(phi, x, t, ax_refl(sub(phi, x, t)))


def diam_over_all(phi: Formula, x: int) -> Derivation:
    """<> A x . phi ~> A x . <> phi"""
    strip = all_intro_left(phi, x, Var(x), ax_refl(phi))
    return all_intro_right(nec(strip), x)


def rename_bound(phi: Formula, x: int, y: int) -> Derivation:
    """A x . phi ~> A y . phi[x:=y], for y free for x in phi and not free in phi.

    The degenerate case y == x is allowed and yields A x . phi ~> A x . phi.
    """
    if not freefor(phi, x, Var(y)):
        raise ValueError("renaming variable is not free for the bound variable")
    if y != x and y in fv(phi):
        raise ValueError("renaming variable occurs free in the formula")
    return all_intro_right(all_instantiate(phi, x, Var(y)), y)


def instantiate_consequent(d: Derivation, x: int, t: Term) -> Derivation:
    """From phi ~> psi build phi ~> psi[x:=t].

    Requires x not free in phi and t free for x in psi.
    """
    seq = conclusion(d)
    if x in fv(seq.ante):
        raise ValueError("variable occurs free in the antecedent")
    if not freefor(seq.cons, x, t):
        raise ValueError("term is not free for the variable in the consequent")
    return term_inst(d, x, t)


def generalize_constant(d: Derivation, x: int, c: str) -> Derivation:
    """From phi ~> psi[x:=c] build phi ~> A x . psi.

    Requires x not free in phi and c occurring in neither phi nor psi;
    psi is recovered from the premise by replacing c with x.
    """
    seq = conclusion(d)
    if x in fv(seq.ante):
        raise ValueError("variable occurs free in the antecedent")
    if occurs_const(c, seq.ante):
        raise ValueError("constant occurs in the antecedent")
    psi = generalize(seq.cons, Const(c), x)
    if sub(psi, x, Const(c)) != seq.cons:
        raise ValueError("premise consequent is not a constant instance")
    step = const_elim(seq.ante, psi, x, c, d)
    return all_intro_right(step, x)


# -- proof file format -----------------------------------------------


@dataclass
class LoadedProof:
    sig: Signature
    derivation: Derivation
    table: SymbolTable = field(default_factory=SymbolTable)


def dump_proof(d: Derivation, sig: Signature, table: SymbolTable | None = None) -> dict[str, Any]:
    """Serialize a derivation to the JSON proof-file structure."""
    table = table or SymbolTable()
    return {
        "signature": {
            "constants": sorted(sig.constants),
            "predicates": dict(sorted(sig.predicates.items())),
        },
        "proof": _dump_node(d, sig, table),
    }


def dumps_proof(d: Derivation, sig: Signature, table: SymbolTable | None = None) -> str:
    return json.dumps(dump_proof(d, sig, table), indent=2)


def _dump_node(d: Derivation, sig: Signature, table: SymbolTable) -> dict[str, Any]:
    _, f_names, _ = _RULES[d.rule]
    params: dict[str, Any] = {
        name: syntax.format_formula(f, table, sig)
        for name, f in zip(f_names, d.formulas)
    }
    if d.var is not None:
        params["x"] = table.name_of(d.var, sig.constants)
    if d.term is not None:
        params["t"] = syntax.format_term(d.term, table, sig)
    if d.const is not None:
        params["c"] = d.const
    return {
        "rule": d.rule,
        "params": params,
        "premises": [_dump_node(p, sig, table) for p in d.premises],
    }


def load_proof(data: str | dict[str, Any]) -> LoadedProof:
    """Parse the JSON proof-file structure; the inverse of `dump_proof`."""
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as e:
            raise ProofFormatError(f"invalid JSON: {e}") from e
    if not isinstance(data, dict):
        raise ProofFormatError("proof file must be a JSON object")
    sig_obj = data.get("signature")
    if not isinstance(sig_obj, dict):
        raise ProofFormatError("missing or malformed 'signature'")
    constants = sig_obj.get("constants", [])
    predicates = sig_obj.get("predicates", {})
    if not isinstance(constants, list) or not isinstance(predicates, dict):
        raise ProofFormatError("malformed signature declarations")
    try:
        sig = Signature(frozenset(constants), {k: int(v) for k, v in predicates.items()})
    except (TypeError, ValueError) as e:
        raise ProofFormatError(str(e)) from e
    table = SymbolTable()
    root = data.get("proof")
    d = _load_node(root, sig, table, path="proof")
    return LoadedProof(sig, d, table)


def _load_node(obj: Any, sig: Signature, table: SymbolTable, path: str) -> Derivation:
    if not isinstance(obj, dict):
        raise ProofFormatError(f"{path}: expected an object")
    rule = obj.get("rule")
    if rule not in _RULES:
        raise ProofFormatError(f"{path}: unknown rule tag {rule!r}")
    _, f_names, extras = _RULES[rule]
    params = obj.get("params", {})
    if not isinstance(params, dict):
        raise ProofFormatError(f"{path}: 'params' must be an object")

    def need(key: str) -> Any:
        if key not in params:
            raise ProofFormatError(f"{path}: {rule} requires parameter {key!r}")
        return params[key]

    try:
        formulas = tuple(
            syntax.parse_formula(need(name), sig, table) for name in f_names
        )
        var = table.intern(str(need("x"))) if "var" in extras else None
        term = syntax.parse_term(need("t"), sig, table) if "term" in extras else None
    except syntax.ParseError as e:
        raise ProofFormatError(f"{path}: {e}") from e
    const = str(need("c")) if "const" in extras else None
    raw_premises = obj.get("premises", [])
    if not isinstance(raw_premises, list):
        raise ProofFormatError(f"{path}: 'premises' must be a list")
    premises = tuple(
        _load_node(p, sig, table, f"{path}.premises[{i}]")
        for i, p in enumerate(raw_premises)
    )
    try:
        return Derivation(rule, formulas, var, term, const, premises)
    except ValueError as e:
        raise ProofFormatError(f"{path}: {e}") from e
