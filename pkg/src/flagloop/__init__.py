"""Exact Groebner-basis and Leray-Serre spectral sequence engine for the free
loop space cohomology of the rank-2 complete flag manifolds."""
__version__ = "0.1.0"

from .algebra import Generator, Poly, Presentation, Ring, graded_basis, multiply
from .groebner import (GroebnerBasis, MonomialOrder, buchberger, eliminate, ideal_intersect,
                       ideal_membership, reduce)
from .intlinalg import Lattice, smith_normal_form
from .parse import ParseError, parse_poly
from .presentations import flag_manifold, instantiate_presentation, loop_fibre
from .spectral import (ClassAssignment, DifferentialAssignment, DifferentialSquareError, EInfinityTable,
                       FibrationSpec, SpectralError, SpectralSequence, run)
from .flagdata import BUNDLE_IDS, NamedBundle, list_identities, load_bundle
from .oracle import oracle_table, quotient_oracle
from .verify import verify_bundle, verify_cycle_identities
