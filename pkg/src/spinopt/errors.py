"""Exception hierarchy shared by all modules.

Every domain error carries a stable ``name`` which the CLI prints on stderr.
"""


class SpinoptError(Exception):
    name = "SpinoptError"

    def __init__(self, message=""):
        super().__init__(message or self.name)


def _make(name, doc):
    return type(name, (SpinoptError,), {"name": name, "__doc__": doc})


NotHermitian = _make("NotHermitian", "Input failed the Hermitian check.")
NotAntiHermitian = _make("NotAntiHermitian", "Input failed the anti-Hermitian check.")
NotUnitary = _make("NotUnitary", "Input failed the unitarity check.")
NotSymmetricUnitary = _make("NotSymmetricUnitary", "Input is not a symmetric unitary.")
BranchAmbiguity = _make("BranchAmbiguity", "An eigenphase sits on the branch cut at pi.")
DimMismatch = _make("DimMismatch", "Operands have incompatible dimensions.")
DimensionCap = _make("DimensionCap", "Requested size exceeds the supported range.")
ZeroCoroot = _make("ZeroCoroot", "Reflection through the zero vector is undefined.")
DegenerateAngle = _make("DegenerateAngle", "Closed-form angle is undetermined.")
FactorizationFail = _make("FactorizationFail", "Symmetric factor extraction failed.")
FoldFail = _make("FoldFail", "No fold candidate landed in the cell.")
Infeasible = _make("Infeasible", "Target lies outside the cone of the orbit.")
NonGenericSystem = _make("NonGenericSystem", "Drift is not a valid generic torus element.")
NotReached = _make("NotReached", "Target not reached within the time budget.")
MalformedInput = _make("MalformedInput", "Input file could not be decoded.")

__all__ = [
    "SpinoptError", "NotHermitian", "NotAntiHermitian", "NotUnitary",
    "NotSymmetricUnitary", "BranchAmbiguity", "DimMismatch", "DimensionCap",
    "ZeroCoroot", "DegenerateAngle", "FactorizationFail", "FoldFail",
    "Infeasible", "NonGenericSystem", "NotReached", "MalformedInput",
]
