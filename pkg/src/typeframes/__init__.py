"""Graded belief logic on finite probability models and Harsanyi type spaces."""
from .errors import *  # noqa: F401,F403
from .logic import (
    DENSE, And, Atom, Believes, Formula, Iff, Implies, Not, Or, ThresholdSet,
    enumerate_formulas, enumerate_semantics, modal_depth, parse_formula, render, size,
)
from .spaces import (
    Event, FiniteMeasurableSpace, ProductSpace, RationalMeasure, generated_algebra,
    is_measurable, marginal, measure, outer_measure, point_mass, product, pushforward,
)
from .frames import (
    ProbabilityFrame, ProbabilityModel, ValidationReport, is_satisfiable_in, is_valid_in,
    satisfies, truth_set, validate_frame, validate_model,
)
from .typespaces import (
    InterpretedTypeSpace, TypeMorphism, TypeSpace, check_type_morphism, find_type_morphisms,
    truth_set_ts, validate_typespace,
)
from .translate import (
    DescriptionPartition, FactoredTypeSpace, describes, description_partition, event_of_formula,
    interpreted_to_model, model_to_typespace, round_trip, typespace_to_frame, witness_merge,
)
from .universal import (
    ModelFamily, check_universality, universal_model, universal_typespace,
)

from .documents import dump_document, load_document, read_document, write_document
from .generators import random_interpreted, random_model, random_separated, random_typespace

__version__ = "0.1.0"
