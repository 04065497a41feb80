"""Exact computation of dual-knot Floer complexes via the surgery mapping cone."""
from .complex import (FilteredComplex, FilteredMap, Generator, StructuralError, ValidationReport, Window,
                      mapping_cone, reduce, subquotient, validate)
from .homology import GradedTable, check_filtered_quasi_iso, homology_f2
from .knot import (BundleError, KnotComplexBundle, build_symmetry_flip, check_alexander_symmetry,
                   tensor_bundle)
from .cone import (DualSpinc, SurgeryCone, XiIndex, assign_IJgr, build_all, build_cone, dual_spinc_structures,
                   truncation_bounds, xi_indexing)
from .dual import dual_cfk, hf_hat, hfk_hat, hfk_hat_all
from .heegaard import alexander_grading, chern_evaluation, euler_measure, relative_check
from .io import load_bundle, load_example
from .rational_surgery import one_over_n_surgery, ratl_filtration_check, simple_knot_bundle
from .upoly import UPoly

__version__ = "0.1.0"
