"""Pass/fail records for identity checks, serializable to JSON."""

import json
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath


def render(x):
    """Exact values as "num/den" strings, reals with 30 significant digits."""
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return f"{x}/1"
    if isinstance(x, mpmath.mpf):
        return mpmath.nstr(x, 30)
    return str(x)


@dataclass
class IdentityResult:
    identity: str
    n_range: tuple
    passed: bool
    first_failure: dict = None

    def to_dict(self):
        return {
            "identity": self.identity,
            "n_range": list(self.n_range),
            "passed": self.passed,
            "first_failure": self.first_failure,
        }


@dataclass
class VerificationReport:
    suite: str
    params: dict = field(default_factory=dict)
    results: list = field(default_factory=list)

    @property
    def passed(self):
        return all(r.passed for r in self.results)

    def add(self, identity, n_range, triples):
        """Record an identity from (n, lhs, rhs) triples; stops at the first mismatch."""
        failure = None
        for n, lhs, rhs in triples:
            if lhs != rhs:
                failure = {"n": n, "lhs": render(lhs), "rhs": render(rhs)}
                break
        result = IdentityResult(identity, tuple(n_range), failure is None, failure)
        self.results.append(result)
        return result

    def add_result(self, identity, n_range, passed, failure=None):
        result = IdentityResult(identity, tuple(n_range), passed, failure)
        self.results.append(result)
        return result

    def first_failure(self):
        return next((r for r in self.results if not r.passed), None)

    def merge(self, other):
        self.results.extend(other.results)
        return self

    def to_dict(self):
        return {
            "suite": self.suite,
            "params": self.params,
            "passed": self.passed,
            "results": [r.to_dict() for r in self.results],
        }

    def to_json(self, indent=None):
        return json.dumps(self.to_dict(), indent=indent)
