from .schemas import (
    CayleyFile,
    LieTrialityFile,
    Manifest,
    ManifestEntry,
    Report,
    StructureConstantsFile,
    SuiteEntry,
    SuiteSummary,
    TrialityGroupFile,
)

__all__ = [
    'CayleyFile',
    'LieTrialityFile',
    'Manifest',
    'ManifestEntry',
    'Report',
    'StructureConstantsFile',
    'SuiteEntry',
    'SuiteSummary',
    'TrialityGroupFile',
]
