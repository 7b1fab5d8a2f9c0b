"""An engine for TCP, a process algebra of truly concurrent processes.

Processes have left and right interfaces and act on all of them at once;
their semantics are labelled transition systems composed as spans.
"""

from .errors import (
    DepthExceeded,
    MissingTau,
    NotLight,
    ParseError,
    SchemaError,
    SortMismatch,
    StateBoundExceeded,
    TcpError,
    UnknownAction,
    UnknownName,
    UnknownState,
)
from .kernel import (
    TAU,
    Alphabet,
    Expr,
    Fix,
    Label,
    Sort,
    Star,
    Sum,
    Tensor,
    Var,
    VarRef,
    WireRelation,
    alpha_canonical,
    builtin_wire,
    free_vars,
    label,
    mk_wire,
    nil,
    sort_of,
    substitute,
    wire_label_set,
)
from .lts import Lts, Transition, compose_light, deadlocks, find_path, free_product, isomorphic, reach, sem
from .models import load_model
from .sos import Step, step, step_closure_guard
from .syntax import ModelFile, json_to_lts, lts_to_dot, lts_to_json, parse_expr, parse_model, print_expr
from .verify import (
    LawReport,
    check_assoc,
    check_prop1,
    check_prop2_star,
    check_prop2_tensor,
    check_wire_laws,
    synth_expr,
)

__version__ = "0.1.0"

__all__ = [
    "alpha_canonical",
    "Alphabet",
    "builtin_wire",
    "check_assoc",
    "check_prop1",
    "check_prop2_star",
    "check_prop2_tensor",
    "check_wire_laws",
    "compose_light",
    "deadlocks",
    "DepthExceeded",
    "Expr",
    "find_path",
    "Fix",
    "free_product",
    "free_vars",
    "isomorphic",
    "json_to_lts",
    "Label",
    "label",
    "LawReport",
    "load_model",
    "Lts",
    "lts_to_dot",
    "lts_to_json",
    "MissingTau",
    "mk_wire",
    "ModelFile",
    "nil",
    "NotLight",
    "parse_expr",
    "parse_model",
    "ParseError",
    "print_expr",
    "reach",
    "SchemaError",
    "sem",
    "Sort",
    "sort_of",
    "SortMismatch",
    "Star",
    "StateBoundExceeded",
    "Step",
    "step",
    "step_closure_guard",
    "substitute",
    "Sum",
    "synth_expr",
    "TAU",
    "TcpError",
    "Tensor",
    "Transition",
    "UnknownAction",
    "UnknownName",
    "UnknownState",
    "Var",
    "VarRef",
    "wire_label_set",
    "WireRelation",
]
