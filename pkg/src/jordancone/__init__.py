"""Euclidean Jordan algebras, symmetric cones, and order isomorphisms."""

from .core import (
    AlgebraDescriptor,
    Element,
    FactorDescriptor,
    LinearOperator,
    basis_element,
    direct_sum,
    identity_operator,
    inner_product,
    jordan_product,
    mult_operator,
    op_apply,
    op_compose,
    op_invert,
    quadratic_rep,
    random_element,
    random_interior,
    random_positive,
    real,
    spin,
    sym,
    triple_product,
    unit,
    zero,
)
from .spectral import (
    SpectralDecomposition,
    atomic_refinement,
    functional_calculus,
    inv,
    is_interior,
    is_positive,
    order_unit_norm,
    power,
    spectral_decomposition,
    spectrum,
    sqrt,
    trace,
)
from .structure import (
    Decomposition,
    center_basis,
    codim1_ideals,
    decompose_engaged_disengaged,
    dim1_factor_indices,
    is_atom,
    is_central,
    is_projection,
    minimal_central_idempotents,
)
from .ordermaps import (
    MonotoneBijection,
    OrderIsoForm,
    PiecewiseLinear,
    Power,
    affinity_on_translated_cone,
    apply_order_iso,
    check_linearity,
    compose_order_iso,
    factorize_linear_order_iso,
    form_from_dict,
    form_to_dict,
    grid_power_demo,
    identity_form,
    invert_order_iso,
    is_jordan_homomorphism,
    is_jordan_isomorphism,
    linear_operator_of_form,
    random_jordan_automorphism,
    random_order_iso,
)
from .verify import (
    Failure,
    SampleReport,
    check_linearity_blackbox,
    check_order_preserving,
    extreme_vector_oracle,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
