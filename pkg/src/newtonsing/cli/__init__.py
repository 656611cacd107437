"""Text interface: polynomial parsing, JSON reports, SVG diagrams and the command line."""
from .main import RunConfig, build_parser, main, run_classify, run_decay_suite, run_regions
from .parse import parse_polynomial
from .report import ReportDocument
from .svg import newton_svg, render_newton_svg

__all__ = ["RunConfig", "build_parser", "main", "run_classify", "run_decay_suite", "run_regions",
           "parse_polynomial", "ReportDocument", "newton_svg", "render_newton_svg"]
