"""Exception types shared across the package."""

from __future__ import annotations


class SusyBlocksError(ValueError):
    """Base class for all validation and verification errors."""


class InvalidSectorError(SusyBlocksError):
    """Fermion-number sector outside 0..n_modes (or outside a stricter bound)."""


class InvalidModeError(SusyBlocksError):
    """Mode or pair index outside 1..n_modes, or a degenerate pair i == j."""


class InvalidPartitionError(SusyBlocksError):
    """Sequence that is not a weakly decreasing positive partition of n."""


class SingularArgumentError(SusyBlocksError):
    """Potential or superpotential evaluated too close to a singularity."""


class TableauMatchError(SusyBlocksError):
    """Character vector matched no partition, or more than one."""


class ConvergenceError(SusyBlocksError):
    """Iterative eigensolver failed to reach the requested residual."""
