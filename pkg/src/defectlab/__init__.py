"""defectlab: exact-arithmetic laboratory for valued fields.

Cut algebra over exact rationals, truncated generalized power series in
equal and mixed characteristic, certified samples of v(a - K), and the
explicit transformations that manufacture pairwise-distinct families of
degree-p Artin-Schreier and Kummer extensions, with witness-carrying
certificates and search-free re-verification.
"""

from .approx import (
    InitialSegmentSample,
    TailSchema,
    defect_of,
    distance,
    in_completion,
    semitame_report,
    value_set,
)
from .artin import (
    Claims,
    ExtensionCert,
    SigmaSample,
    as_extension,
    as_family,
    as_generator_transform,
    as_root,
    defect_criteria,
    imperfection_witness,
    sigma_sample,
    transform_inseparable,
)
from .cuts import (
    Cut,
    CutEnclosure,
    ExtRat,
    MINUS_INF,
    PLUS_INF,
    ValueGroupDesc,
    cut_compare,
    cut_of_sample,
    dist_translate,
    segment_affine,
)
from .fields import FieldDesc, enumerate_elements, preset_field, tower_field
from .kummer import (
    classify_kummer_defect,
    kummer_family,
    lab_superdependent_unit,
    normalize_to_1unit,
    pth_power_difference_check,
    transform_mixed,
)
from .series import (
    Polynomial,
    Series,
    SeriesContext,
    invert,
    make_equal_context,
    make_mixed_context,
    newton_root,
    pth_root,
    valuation_residue,
    zeta_p,
)

__version__ = "0.1.0"
