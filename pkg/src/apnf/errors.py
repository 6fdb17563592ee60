"""Exception hierarchy.  The CLI maps these onto its documented exit codes."""

from __future__ import annotations


class ApnfError(Exception):
    """Base class for all package errors."""


class IncompatibleContextError(ApnfError):
    """Operands disagree on grading or truncation order."""


class CompositionDomainError(ApnfError):
    """Substituted series has a nonzero constant term."""


class GeneratorOrderError(ApnfError):
    """Generator's lowest weight is below k0 + l0 + 1."""


class ParameterError(ApnfError):
    """Invalid parameter combination (empty weight window etc.)."""


class UnsolvableFieldError(ApnfError):
    """The field (f, g) is not divergence free; no Hamiltonian exists.

    Carries the first violated relation k*a_{k,l-1,m} + l*b_{k-1,l,m} = 0.
    """

    def __init__(self, monomial, value):
        self.monomial = monomial
        self.value = value
        k, l, m = monomial
        super().__init__(
            f"nonzero divergence: k*a_(k,l-1,m) + l*b_(k-1,l,m) = {value} != 0 "
            f"at (k,l,m)=({k},{l},{m})"
        )


class NotAreaPreservingError(ApnfError):
    """Jacobian determinant differs from the required constant."""

    def __init__(self, monomial, value, expected):
        self.monomial = monomial
        self.value = value
        self.expected = expected
        k, l, m = monomial
        super().__init__(
            f"det DF - ({expected}) has coefficient {value} on "
            f"x^{k} y^{l} eps^{m}"
        )


class UnsupportedLinearPartError(ApnfError):
    """Linear part at eps=0 is not rationally similar to a supported form."""


class ShapeError(ApnfError):
    """Input Hamiltonian does not have the leading shape the reduction needs."""


class DegenerateCubicError(ApnfError):
    """No rational unimodular map brings the cubic to a*x^3 + x*y^2."""


class IrrationalNormalizationError(ApnfError):
    """Normalising the cubic would require an irrational root."""


class DegenerateLeadingOrderError(ApnfError):
    """The x*y^2 coefficient of the leading cubic vanishes."""


class InternalInconsistencyError(ApnfError):
    """A condition the theory guarantees failed; indicates bad input or a bug."""


class InfeasibleShapeError(ApnfError):
    """Homological solve cannot confine the residual to the allowed shape."""

    def __init__(self, monomials):
        self.monomials = tuple(monomials)
        pretty = ", ".join(f"x^{k} y^{l} eps^{m}" for k, l, m in self.monomials)
        super().__init__(f"obstructing monomials outside allowed shape: {pretty}")


class PsfParseError(ApnfError):
    """PSF text is malformed.  Carries 1-based line and column."""

    def __init__(self, message, line, col=1):
        self.line = line
        self.col = col
        super().__init__(f"line {line}, col {col}: {message}")
