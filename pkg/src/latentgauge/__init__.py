"""Disentanglement and interpolatability metrics for latent generative models.

The package computes six gap-style disentanglement metrics (mig, sap,
modularity, dmig, xmig, dlig) and two interpolatability metrics
(smoothness, monotonicity) from plain numeric arrays, with deterministic
seeded estimation, streaming update/compute sessions, metric bundles, and a
CSV/NPY-to-JSON command line.
"""

from .batches import (
    AttributeBatch,
    InterpolationTrace,
    LatentBatch,
    RegularizationMap,
)
from .config import CONTINUOUS, DISCRETE, EstimatorConfig
from .disentanglement import (
    DisentanglementResult,
    dlig,
    dmig,
    mig,
    modularity,
    sap,
    xmig,
)
from .estimators import (
    conditional_entropy,
    entropy,
    mi_matrix,
    mutual_info,
    predictability_score,
)
from .interpolatability import (
    InterpolatabilityResult,
    contraharmonic_mean,
    liad,
    monotonicity,
    monotonicity_result,
    smoothness,
    smoothness_result,
)
from .report import (
    SCHEMA_VERSION,
    ReportConfig,
    ReportDocument,
    ReportEntry,
    build_report,
    from_json,
    to_json,
)
from .session import (
    BundleSpec,
    MetricReport,
    MetricSession,
    MetricSpec,
    compute,
    create,
    dami_bundle,
    update,
)
from .tableio import TableFile, TableFormatError, load_table

__version__ = "0.1.0"

__all__ = [
    "AttributeBatch",
    "BundleSpec",
    "CONTINUOUS",
    "DISCRETE",
    "DisentanglementResult",
    "EstimatorConfig",
    "InterpolatabilityResult",
    "InterpolationTrace",
    "LatentBatch",
    "MetricReport",
    "MetricSession",
    "MetricSpec",
    "RegularizationMap",
    "ReportConfig",
    "ReportDocument",
    "ReportEntry",
    "SCHEMA_VERSION",
    "TableFile",
    "TableFormatError",
    "build_report",
    "compute",
    "conditional_entropy",
    "contraharmonic_mean",
    "create",
    "dami_bundle",
    "dlig",
    "dmig",
    "entropy",
    "from_json",
    "liad",
    "load_table",
    "mi_matrix",
    "mig",
    "modularity",
    "monotonicity",
    "monotonicity_result",
    "mutual_info",
    "predictability_score",
    "sap",
    "smoothness",
    "smoothness_result",
    "to_json",
    "update",
    "xmig",
]
