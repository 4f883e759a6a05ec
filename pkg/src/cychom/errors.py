"""Exception hierarchy.

Every mathematical failure carries enough context (an offending index
triple, a label, a residual) for the CLI to print a counterexample.
"""


class CychomError(Exception):
    """Base class for all library errors."""


class ParseError(CychomError, ValueError):
    pass


class FieldMismatch(CychomError, TypeError):
    pass


class DivisionByZero(CychomError, ZeroDivisionError):
    pass


class NotAComplex(CychomError):
    pass


class DegreeTooLarge(CychomError):
    def __init__(self, size, cap, what="chain space"):
        self.size = size
        self.cap = cap
        super().__init__("%s of dimension %d exceeds size cap %d" % (what, size, cap))


class MethodDisagreement(CychomError):
    pass


# algebra axioms

class NotAssociative(CychomError):
    def __init__(self, triple, residual=None):
        self.triple = triple
        self.residual = residual
        super().__init__("associativity fails on basis triple %r" % (triple,))


class BadUnit(CychomError):
    def __init__(self, label):
        self.label = label
        super().__init__("unit law fails on basis element %r" % (label,))


class NotATrace(CychomError):
    def __init__(self, pair):
        self.pair = pair
        super().__init__("trace property fails on pair %r" % (pair,))


class NotADerivation(CychomError):
    def __init__(self, pair):
        self.pair = pair
        super().__init__("Leibniz rule fails on pair %r" % (pair,))


class CarrierMismatch(CychomError):
    pass


class NotInvertible(CychomError):
    pass


# constructions

class GroupAxiomError(CychomError):
    pass


class GroupoidAxiomError(CychomError):
    pass


class NotAnAction(CychomError):
    def __init__(self, g, detail=""):
        self.g = g
        super().__init__("action of %r is not a unital automorphism %s" % (g, detail))


class NotAHomomorphism(CychomError):
    def __init__(self, g, h):
        self.pair = (g, h)
        super().__init__("alpha(%r)alpha(%r) != alpha(%r*%r)" % (g, h, g, h))


class NotCoprime(CychomError):
    pass


class FuelExhausted(CychomError):
    pass


class NotACocycle(CychomError):
    def __init__(self, triple, residual=None):
        self.triple = triple
        self.residual = residual
        super().__init__("cocycle identity fails on %r" % (triple,))


class NotClosedUnderBracket(CychomError):
    pass


# cochains and pairings

class NotCyclic(CychomError):
    def __init__(self, args):
        self.args_tuple = args
        super().__init__("cyclic condition fails on %r" % (args,))


class NotClosed(CychomError):
    def __init__(self, args):
        self.args_tuple = args
        super().__init__("b(phi) != 0 on %r" % (args,))


class NoCertificate(CychomError):
    pass


class DegreeMismatch(CychomError):
    pass


class NotNormalized(CychomError):
    pass


class NotAGroupCocycle(CychomError):
    pass


class NotInvariant(CychomError):
    pass


class UnknownEntry(CychomError, KeyError):
    pass
