"""Time-optimal control on SU(2) and SU(4) through Cartan and KAK decompositions."""
from . import cartan, config, errors, kakdec, kron, lp, matcore, pmp, reach, timeopt
from .errors import SpinoptError

__all__ = ["cartan", "config", "errors", "kakdec", "kron", "lp", "matcore", "pmp", "reach",
           "timeopt", "SpinoptError"]
__version__ = "0.1.0"
