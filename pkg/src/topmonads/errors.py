"""Exception hierarchy shared by all modules."""


class TopmonadsError(Exception):
    """Base class for all library errors."""


class NotAPreorder(TopmonadsError):
    """Relation fails reflexivity or transitivity; carries a witness pair."""

    def __init__(self, reason, witness):
        super().__init__(f"{reason}: witness {witness}")
        self.reason = reason
        self.witness = witness


class NotATopology(TopmonadsError):
    """Open family violates a topology axiom."""


class NotOpen(TopmonadsError):
    """A set claimed to be open is not a member of the open family."""


class ShapeMismatch(TopmonadsError):
    """Operands live on different spaces (or maps are not composable)."""


class NotAValidFunctional(TopmonadsError):
    """Boolean table on opens fails strictness or join-preservation."""

    def __init__(self, reason, witness=None):
        super().__init__(f"{reason}" + (f": witness {witness}" if witness else ""))
        self.reason = reason
        self.witness = witness


class NotClosedFamily(TopmonadsError):
    """A family of closed sets is not down-closed under inclusion."""


class NotStrict(TopmonadsError):
    """Valuation table has nonzero mass on the empty set."""


class NotMonotone(TopmonadsError):
    """Valuation table decreases along an inclusion of opens."""

    def __init__(self, witness):
        super().__init__(f"monotonicity fails on open pair {witness}")
        self.witness = witness


class NotModular(TopmonadsError):
    """Valuation table violates the modular law on a pair of opens."""

    def __init__(self, witness):
        super().__init__(f"modularity fails on open pair {witness}")
        self.witness = witness


class NotLowerSemicontinuous(TopmonadsError):
    """Point function has a non-open strict upper level set."""


class NotAKernel(TopmonadsError):
    """Point-to-valuation table is not continuous into the valuation space."""


class InfinityIndeterminate(TopmonadsError):
    """Signed extended-rational arithmetic hit an indeterminate infinity."""


class NegativeWeight(TopmonadsError):
    """Measure extension produced a negative point weight (anomaly)."""


class InfiniteMass(TopmonadsError):
    """Operation requires finite total mass."""


class NotNormalized(TopmonadsError):
    """Probability-level input does not have total mass one."""


class OrderNotClosed(TopmonadsError):
    """Auxiliary preorder's graph is not closed in the product topology."""


class PreconditionFailed(TopmonadsError):
    """Stated precondition of an operation does not hold."""


class NotAnHAlgebra(TopmonadsError):
    """Algebra-transfer input failed the hyperspace-algebra checks."""


class UnknownSuite(TopmonadsError):
    """Law-suite name is not registered."""


class NotAFailure(TopmonadsError):
    """Shrinking was asked to minimize an input that does not fail."""


class LawViolation(TopmonadsError):
    """A theorem-backed internal cross-check disagreed (build-stopping bug)."""
