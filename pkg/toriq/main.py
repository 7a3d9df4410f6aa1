"""
toriq command-line interface.

    toriq <command> <file-or-fixture> [--json] [--out PATH]

Exit codes: 0 computed, 2 validation failure, 3 unsupported or uncertified.
"""
import argparse
import logging
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from pydantic import BaseModel

from toriq.core.config import settings
from toriq.core.exceptions import ToriqError, ValidationFailure
from toriq.models.fan import Fan
from toriq.schemas.problem import ProblemFile, load_problem
from toriq.schemas.report import (
    ErrorReport,
    ExamplesReport,
    FixtureSchema,
    HhatReport,
    ImageReport,
    SeparationReport,
    SlicePlotReport,
    TpQuotientReport,
    ValidateReport,
)
from toriq.services.covering import is_weakly_proper
from toriq.services.diagnosis import diagnose, orbit_image
from toriq.services.fans import validate_fan_map
from toriq.services.quotient import (
    compute_hhat,
    compute_separation,
    equivalence_classes,
    naive_tp_quotient,
    non_separated_pairs,
    tv_quotient,
)
from toriq.services.report_service import (
    cover_schema,
    diagnosis_schema,
    fan_schema,
    hhat_schema,
    orbit_image_schema,
    render_json,
    render_text,
    separation_schema,
    system_schema,
    tp_quotient_schema,
)
from toriq.services.slice_plot import parse_level, write_slice_plot
from toriq.utils.fixtures import list_fixtures, resolve_problem_path

logger = logging.getLogger(__name__)

Handler = Callable[[argparse.Namespace, Optional[ProblemFile]], Tuple[BaseModel, str]]


def setup_logging():
    """Configure the root logger: stderr always, a rotating file when TORIQ_LOG_FILE is set."""
    log_format = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if settings.TORIQ_LOG_FILE:
        log_path = Path(settings.TORIQ_LOG_FILE)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        handlers.append(
            RotatingFileHandler(
                log_path,
                maxBytes=10485760,  # 10MB
                backupCount=5,
                encoding='utf-8',
            )
        )
    logging.basicConfig(level=settings.log_level, format=log_format, handlers=handlers, force=True)

    # Set specific log levels for noisy libraries
    logging.getLogger('reportlab').setLevel(logging.WARNING)
    logging.getLogger('svglib').setLevel(logging.WARNING)


def cmd_validate(args, problem: ProblemFile):
    structure = problem.structure()
    target = problem.target_fan()
    assignment = None
    if target is not None:
        assignment = list(validate_fan_map(problem.target_map(), structure, target).assignment)
    report = ValidateReport(
        command="validate",
        description=problem.description,
        kind="fan" if isinstance(structure, Fan) else "system",
        structure=fan_schema(structure) if isinstance(structure, Fan) else system_schema(structure),
        target=fan_schema(target) if target is not None else None,
        assignment=assignment,
    )
    return report, "validate"


def cmd_hhat(args, problem: ProblemFile):
    action = problem.action()
    result = compute_hhat(action)
    report = HhatReport(
        command="hhat",
        description=problem.description,
        hhat=hhat_schema(result),
        non_separated_pairs=[list(pair) for pair in non_separated_pairs(action)],
        classes=[list(members) for members in equivalence_classes(action, result.lattice)],
    )
    return report, "hhat"


def cmd_separation(args, problem: ProblemFile):
    result = compute_separation(problem.action())
    report = SeparationReport(
        command="separation", description=problem.description, separation=separation_schema(result)
    )
    return report, "separation"


def cmd_tv_quotient(args, problem: ProblemFile):
    result = tv_quotient(problem.action(), target=problem.target_map())
    report = SeparationReport(
        command="tv-quotient", description=problem.description, separation=separation_schema(result)
    )
    return report, "separation"


def cmd_tp_quotient(args, problem: ProblemFile):
    result = naive_tp_quotient(problem.action())
    report = TpQuotientReport(
        command="tp-quotient", description=problem.description, tp_quotient=tp_quotient_schema(result)
    )
    return report, "tp-quotient"


def cmd_image(args, problem: ProblemFile):
    if problem.map is not None:
        fan_map = validate_fan_map(problem.target_map(), problem.structure(), problem.target_fan())
    else:
        action = problem.action()
        separation = tv_quotient(action)
        fan_map = validate_fan_map(separation.projection, action.space, separation.quotient_fan)
    report = ImageReport(
        command="image",
        description=problem.description,
        matrix=[list(row) for row in fan_map.matrix.rows],
        target=fan_schema(fan_map.target),
        weak_properness=cover_schema(is_weakly_proper(fan_map)),
        orbit_image=orbit_image_schema(orbit_image(fan_map)),
    )
    return report, "image"


def cmd_diagnose(args, problem: ProblemFile):
    return diagnosis_schema(diagnose(problem.action()), problem.description), "diagnose"


def _parse_hyperplane(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",")]
    except ValueError as exc:
        raise ValidationFailure(f"hyperplane {text!r} is not a comma-separated integer vector") from exc


def cmd_slice_plot(args, problem: ProblemFile):
    if args.out is None:
        raise ValidationFailure("slice-plot needs --out PATH for the SVG file")
    if args.target:
        fan = problem.target_fan()
        if fan is None:
            raise ValidationFailure("--target needs a problem file with a map block")
        cones = fan.maximal_cones
    else:
        structure = problem.structure()
        cones = structure.maximal_cones if isinstance(structure, Fan) else structure.charts
    hyperplane = _parse_hyperplane(args.hyperplane)
    level = parse_level(args.level)
    regions = write_slice_plot(cones, hyperplane, level, args.out)
    report = SlicePlotReport(
        command="slice-plot",
        description=problem.description,
        out=str(args.out),
        hyperplane=hyperplane,
        level=str(level),
        regions=len(regions),
        polygons=[[[str(x), str(y)] for x, y in region.points] for region in regions],
    )
    return report, "slice-plot"


def cmd_examples(args, problem: Optional[ProblemFile]):
    report = ExamplesReport(
        command="examples",
        fixtures=[FixtureSchema(name=name, description=text) for name, text in list_fixtures()],
    )
    return report, "examples"


COMMANDS: Dict[str, Tuple[Handler, str]] = {
    "validate": (cmd_validate, "validate a fan or an affine system of fans"),
    "hhat": (cmd_hhat, "compute the enlarged subtorus Hhat with its rule trace"),
    "separation": (cmd_separation, "compute the invariant separation"),
    "tv-quotient": (cmd_tv_quotient, "compute the quotient among toric varieties"),
    "tp-quotient": (cmd_tp_quotient, "naive quotient among toric prevarieties"),
    "image": (cmd_image, "orbit image and weak properness of the map"),
    "diagnose": (cmd_diagnose, "full obstruction report"),
    "slice-plot": (cmd_slice_plot, "draw a planar cross-section of a 3-dimensional fan as SVG"),
    "examples": (cmd_examples, "list bundled fixtures"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toriq", description="Quotients of subtorus actions on toric varieties."
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub = subparsers.add_parser(name, help=help_text)
        if name != "examples":
            sub.add_argument("file", help="problem file, or the name of a bundled fixture")
        sub.add_argument("--json", action="store_true", help="machine-readable output")
        sub.add_argument("--out", type=Path, default=None, help="output path")
        if name == "slice-plot":
            sub.add_argument("--hyperplane", default="1,0,0", help="integer normal vector, e.g. 1,0,0")
            sub.add_argument("--level", default="1", help="rational level, e.g. 1 or 3/2")
            sub.add_argument("--target", action="store_true", help="plot the target fan of the map")
    return parser


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8")


def main(argv: Optional[List[str]] = None) -> int:
    setup_logging()
    args = build_parser().parse_args(argv)
    handler, _ = COMMANDS[args.command]
    color = settings.color_enabled and not args.json
    # slice-plot writes its SVG to --out; its report goes to stdout
    report_out = None if args.command == "slice-plot" else args.out

    try:
        problem = None
        if args.command != "examples":
            problem = load_problem(resolve_problem_path(args.file))
        report, template = handler(args, problem)
    except ToriqError as exc:
        logger.info("%s failed: %s", args.command, exc.message)
        error = ErrorReport(**exc.payload())
        if args.json:
            _emit(render_json(error), report_out)
        else:
            sys.stderr.write(render_text("error", error, color=color))
        return exc.exit_code

    _emit(render_json(report) if args.json else render_text(template, report, color=color), report_out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
