"""Formula-free verification of drive amplitudes on a truncated Fock space.

The oracle in :mod:`drivejj.fockcheck.oracle` shares no numerics with the
engine modules: the circuit potential is re-assembled from the raw model
fields, the driven Hamiltonian is built by operator eigendecomposition, and
amplitudes are recovered by Fourier analysis plus a ladder solve. The
comparison harness lives separately in :mod:`drivejj.fockcheck.compare`.
"""

from .compare import VerifyReport, VerifyRow, verify_engines
from .oracle import ExtractionResult, build_driven_hamiltonian, extract_sc

__all__ = [
    "ExtractionResult",
    "VerifyReport",
    "VerifyRow",
    "build_driven_hamiltonian",
    "extract_sc",
    "verify_engines",
]
