from .config import VERSION
from .game import TuGame
from .leastcore import least_core, prenucleolus_lp_oracle
from .prekernel import solve_prekernel

__version__ = VERSION

__all__ = ["VERSION", "TuGame", "least_core", "prenucleolus_lp_oracle", "solve_prekernel"]
