"""
Services module for the triality toolkit

This module contains the verification services: exact linear algebra, loops,
groups with triality, autotopies, nonassociative algebras, Hopf algebras,
enveloping algebras, convolution, and the corpus and suite plumbing.
"""

from .loop_service import FiniteLoop, check_loop, check_moufang, verify_doro_relations
from .gtriality_service import TrialityGroup, check_triality, moufang_from_triality
from .autotopy_service import AutotopyGroup, m_of_atp, psi_iso, w_group
from .malcev_service import CayleyAlgebra, LieWithTriality, StructureConstants, build_cayley, lie_of_malcev
from .hopf_service import group_algebra, loop_algebra, mh_subalgebra, verify_doro_target
from .envelope_service import EnvelopingAlgebra, check_ug_triality, mh_envelope
from .conv_service import GroupLikeCoalgebra, atpc_triality_checks, convolution_loop

__all__ = [
    # Loops
    'FiniteLoop',
    'check_loop',
    'check_moufang',
    'verify_doro_relations',

    # Groups with triality
    'TrialityGroup',
    'check_triality',
    'moufang_from_triality',

    # Autotopies
    'AutotopyGroup',
    'm_of_atp',
    'psi_iso',
    'w_group',

    # Algebras
    'CayleyAlgebra',
    'LieWithTriality',
    'StructureConstants',
    'build_cayley',
    'lie_of_malcev',

    # Hopf algebras
    'group_algebra',
    'loop_algebra',
    'mh_subalgebra',
    'verify_doro_target',
    'EnvelopingAlgebra',
    'check_ug_triality',
    'mh_envelope',

    # Convolution
    'GroupLikeCoalgebra',
    'atpc_triality_checks',
    'convolution_loop',
]
