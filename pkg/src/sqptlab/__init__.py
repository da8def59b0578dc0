"""Standard quantum process tomography with vectorized operators and SIC-POVMs."""

from . import channels, experiment, frames, sic, sqpt, vecrep
from .channels import ChannelSpec, KrausSet, make_channel
from .errors import (
    ArgumentError,
    ConsistencyError,
    FrameError,
    NumericError,
    ParseError,
    PovmError,
    RepresentationError,
    SearchError,
    SolveError,
    SQPTError,
)
from .frames import build_frame, build_povm, standard_basis
from .sic import sic_d2, sic_search

__version__ = "0.1.0"
