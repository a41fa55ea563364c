"""Exact algebra and calculus for supercommutative polynomial algebras."""
from .errors import (SuperFermatError, UserError, InternalError, DivisionByZero, SignatureMismatch,
                     ParityMismatch, TheoryMismatch, OddGeneratorPresent, InhomogeneousRelation,
                     NotFiniteDimensional, NoAugmentation, NotWeilAlgebra, AlgebraMismatch, DomainError,
                     SyntaxProblem, LexError, ParseError, UnknownGenerator, UnknownFunction,
                     GroebnerStepLimit)
from .kernels import BACKEND
from .superpoly import (Parity, Signature, SuperMonomial, SuperPoly, OddDecomposition, add, mul,
                        parity_of, even_part, odd_part, decompose_odd, substitute, generators)
from .calculus import (VariableRef, diff_quotient_even, diagonal, partial_even, odd_split,
                       partial_odd, check_fermat_even, taylor_coefficients)
from .ideals import (HomogeneousIdeal, GroebnerBasis, QuotientAlgebra, groebner, normal_form,
                     ideal_member, quotient_mul, staircase_basis, augmentation_nilpotency)
from .theories import (TheoryTag, FreeAlgebra, SuperMorphism, FinitePresentation, compose,
                       coproduct_free, product_algebra, iota_lower_shriek, reduce_rd,
                       check_product_preservation)
from .weil import (SmoothExpr, RealWeilAlgebra, JetElement, SuperFunction, smooth_eval_jet,
                   berezin_eval, taylor_multi_index_table)
from .parser import tokenize, parse_superpoly, parse_smooth


def load_schema() -> dict:
    """The JSON schema every ``--json`` output validates against."""
    import json
    from importlib.resources import files
    return json.loads(files(__name__).joinpath("schemas/superfermat.schema.json").read_text())


__version__ = "0.1.0"

__all__ = ["SuperFermatError", "UserError", "InternalError", "DivisionByZero", "SignatureMismatch",
    "ParityMismatch", "TheoryMismatch", "OddGeneratorPresent", "InhomogeneousRelation",
    "NotFiniteDimensional", "NoAugmentation", "NotWeilAlgebra", "AlgebraMismatch", "DomainError",
    "SyntaxProblem", "LexError", "ParseError", "UnknownGenerator", "UnknownFunction",
    "GroebnerStepLimit", "BACKEND", "Parity", "Signature", "SuperMonomial", "SuperPoly",
    "OddDecomposition", "add", "mul", "parity_of", "even_part", "odd_part", "decompose_odd",
    "substitute", "generators", "VariableRef", "diff_quotient_even", "diagonal", "partial_even",
    "odd_split", "partial_odd", "check_fermat_even", "taylor_coefficients", "HomogeneousIdeal",
    "GroebnerBasis", "QuotientAlgebra", "groebner", "normal_form", "ideal_member", "quotient_mul",
    "staircase_basis", "augmentation_nilpotency", "TheoryTag", "FreeAlgebra", "SuperMorphism",
    "FinitePresentation", "compose", "coproduct_free", "product_algebra", "iota_lower_shriek",
    "reduce_rd", "check_product_preservation", "SmoothExpr", "RealWeilAlgebra", "JetElement",
    "SuperFunction", "smooth_eval_jet", "berezin_eval", "taylor_multi_index_table", "tokenize",
    "parse_superpoly", "parse_smooth", "load_schema", "__version__"]
