"""Requirements quality assurance: linting operators, attribute priorities and QA plans."""
from rqa.corpus import RequirementsSpec, load_spec, parse_reqspec, parse_reqspec_json
from rqa.kernels import BACKEND

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "RequirementsSpec",
    "load_spec",
    "parse_reqspec",
    "parse_reqspec_json",
]
