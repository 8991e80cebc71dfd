"""Certified Janssen-test evaluation for Gabor systems with Hermite windows."""

from .ambiguity import (
    Euclid,
    HermiteWindow,
    JanssenReport,
    MaxNorm,
    TailKind,
    TailStrategy,
    Verdict,
    ambiguity_mag,
    ambiguity_signed,
    j1,
    j1_derivative,
    janssen_sum,
    signed_lattice_sum,
    tail_bound,
    upper_frame_bound_estimate,
)
from .intervals import Enclosure
from .lattice import Layer, LatticePoint, RectLattice, enumerate_box, layers_upto, r2
from .specfun import CERTIFIED, FAST, LogSigned, PrecisionConfig, laguerre_eval, laguerre_explicit

__version__ = "0.1.0"

__all__ = [
    "CERTIFIED", "FAST", "Enclosure", "Euclid", "HermiteWindow", "JanssenReport",
    "LatticePoint", "Layer", "LogSigned", "MaxNorm", "PrecisionConfig", "RectLattice",
    "TailKind", "TailStrategy", "Verdict", "ambiguity_mag", "ambiguity_signed",
    "enumerate_box", "j1", "j1_derivative", "janssen_sum", "laguerre_eval",
    "laguerre_explicit", "layers_upto", "r2", "signed_lattice_sum", "tail_bound",
    "upper_frame_bound_estimate",
]
