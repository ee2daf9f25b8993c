"""Novikov-Betti numbers, Novikov torsion and free-subgroup certificates."""

from novikov_probe.certify import Certificate
from novikov_probe.certify import amenability_consistency
from novikov_probe.certify import certify
from novikov_probe.certify import replay_certificate
from novikov_probe.certify import scan_classes
from novikov_probe.chain import BoundaryComplex
from novikov_probe.chain import dump_complex
from novikov_probe.chain import load_complex
from novikov_probe.errors import InputError
from novikov_probe.errors import NovikovError
from novikov_probe.errors import ResourceCapError
from novikov_probe.fox import assemble_presentation_complex
from novikov_probe.laurent import LaurentPoly
from novikov_probe.novikov import NovikovNumbers
from novikov_probe.novikov import compute_numbers
from novikov_probe.novikov import generic_dims
from novikov_probe.novikov import novikov_betti
from novikov_probe.novikov import sample_bundle
from novikov_probe.novikov import torsion_count
from novikov_probe.options import EngineOptions
from novikov_probe.presentation import CharacterClass
from novikov_probe.presentation import Presentation
from novikov_probe.presentation import parse_presentation
from novikov_probe.presentation import validate_character

__all__ = [
    "BoundaryComplex",
    "Certificate",
    "CharacterClass",
    "EngineOptions",
    "InputError",
    "LaurentPoly",
    "NovikovError",
    "NovikovNumbers",
    "Presentation",
    "ResourceCapError",
    "amenability_consistency",
    "assemble_presentation_complex",
    "certify",
    "compute_numbers",
    "dump_complex",
    "generic_dims",
    "load_complex",
    "novikov_betti",
    "parse_presentation",
    "replay_certificate",
    "sample_bundle",
    "scan_classes",
    "torsion_count",
    "validate_character",
]
