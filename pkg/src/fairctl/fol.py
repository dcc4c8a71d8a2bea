"""First-order formulas over the algebra signature.

Atoms are equalities of L-terms (terms are `formulas.Formula` values, whose
variables range over algebra elements).  Connectives: ~, &, |, ->; quantifiers
bind term variables and range over all algebra elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .formulas import Formula


@dataclass(frozen=True)
class TermEq:
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return f"({self.left} = {self.right})"


@dataclass(frozen=True)
class FNeg:
    body: "FO"

    def __str__(self) -> str:
        return f"!{self.body}"


@dataclass(frozen=True)
class FAnd:
    left: "FO"
    right: "FO"

    def __str__(self) -> str:
        return f"({self.left} && {self.right})"


@dataclass(frozen=True)
class FOr:
    left: "FO"
    right: "FO"

    def __str__(self) -> str:
        return f"({self.left} || {self.right})"


@dataclass(frozen=True)
class FImp:
    left: "FO"
    right: "FO"

    def __str__(self) -> str:
        return f"({self.left} -> {self.right})"


@dataclass(frozen=True)
class FForall:
    var: str
    body: "FO"

    def __str__(self) -> str:
        return f"(forall {self.var}. {self.body})"


@dataclass(frozen=True)
class FExists:
    var: str
    body: "FO"

    def __str__(self) -> str:
        return f"(exists {self.var}. {self.body})"


FO = Union[TermEq, FNeg, FAnd, FOr, FImp, FForall, FExists]


def is_quantifier_free(phi: FO) -> bool:
    if isinstance(phi, TermEq):
        return True
    if isinstance(phi, FNeg):
        return is_quantifier_free(phi.body)
    if isinstance(phi, (FAnd, FOr, FImp)):
        return is_quantifier_free(phi.left) and is_quantifier_free(phi.right)
    return False


def free_variables(phi: FO) -> set:
    """Free term-variable names of phi."""
    if isinstance(phi, TermEq):
        return phi.left.variables() | phi.right.variables()
    if isinstance(phi, FNeg):
        return free_variables(phi.body)
    if isinstance(phi, (FAnd, FOr, FImp)):
        return free_variables(phi.left) | free_variables(phi.right)
    if isinstance(phi, (FForall, FExists)):
        return free_variables(phi.body) - {phi.var}
    raise TypeError(f"not an FO formula: {phi!r}")
