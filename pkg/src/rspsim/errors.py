"""Exception hierarchy shared by every rspsim module."""


class DomainError(ValueError):
    """A parameter lies outside the domain where a formula or protocol is defined."""


class CentralGapError(DomainError):
    """theta falls in the uncovered central gap of a finite-depth schedule.

    The explicit protocol cannot serve such angles; the maximally entangled
    central protocols (``improved1`` or ``appendixB``) cover them instead.
    """

    def __init__(self, theta, lo, hi):
        self.theta = theta
        self.lo = lo
        self.hi = hi
        super().__init__(
            f"theta={theta!r} lies in the central gap ({lo:.12g}, {hi:.12g}); "
            "use protocol 'improved1' or 'appendixB' for this region"
        )


class DegenerateBranchError(DomainError):
    """A measurement branch has (numerically) zero probability."""


class InfeasiblePlanError(DomainError):
    """A compression plan cannot meet its success probability at some head."""

    def __init__(self, head, P, floor):
        self.head = head
        self.P = P
        self.floor = floor
        super().__init__(
            f"P={P!r} is below the floor 1/(B^2+1)={floor:.12g} at head {head}"
        )
