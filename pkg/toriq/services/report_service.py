"""
Report assembly: domain results to pydantic report schemas, and rendering
to JSON (sorted keys, two-space indent) or to text through jinja2.
"""
import json
import logging
from typing import Dict, List, Optional

from jinja2 import BaseLoader, Environment, StrictUndefined
from pydantic import BaseModel

from toriq.core.config import settings
from toriq.models.cone import Cone
from toriq.models.fan import AffineSystemOfFans, Fan, LabelledCone
from toriq.models.lattice import IntMat
from toriq.models.quotient import (
    ChainFailure,
    CoverWitness,
    DiagnosisReport,
    GlueingWitness,
    HhatResult,
    OrbitImageReport,
    RuleApplication,
    SeparationResult,
    TpQuotientResult,
)
from toriq.schemas.report import (
    ChainFailureSchema,
    ConeSchema,
    CoverSchema,
    DiagnosisReportSchema,
    DroppedConeSchema,
    FaceImageSchema,
    FanSchema,
    GlueingWitnessSchema,
    HhatSchema,
    IntersectionSchema,
    LabelledConeSchema,
    MergeStepSchema,
    OrbitImageSchema,
    RuleApplicationSchema,
    SeparationSchema,
    SystemSchema,
    TargetCoordinatesSchema,
    TpQuotientSchema,
)
from toriq.services.report_templates import get_report_templates

logger = logging.getLogger(__name__)

ANSI = {"heading": "\033[1m", "good": "\033[32m", "bad": "\033[31m", "reset": "\033[0m"}


def _rows(M: IntMat) -> List[List[int]]:
    return [list(row) for row in M.rows]


def _gens(cone: Cone) -> List[List[int]]:
    return [list(g) for g in cone.generators]


def cone_schema(cone: Cone) -> ConeSchema:
    return ConeSchema(
        rays=_gens(cone),
        lineality=[list(v) for v in cone.lineality_basis] or None,
        dim=cone.dim,
    )


def labelled_schema(label: LabelledCone) -> LabelledConeSchema:
    return LabelledConeSchema(chart=label.chart, rays=_gens(label.cone))


def fan_schema(fan: Fan) -> FanSchema:
    return FanSchema(
        lattice_rank=fan.ambient_rank,
        maximal_cones=[_gens(cone) for cone in fan.maximal_cones],
    )


def system_schema(system: AffineSystemOfFans) -> SystemSchema:
    return SystemSchema(
        lattice_rank=system.ambient_rank,
        charts=[_gens(cone) for cone in system.charts],
        intersections=[
            IntersectionSchema(i=i, j=j, cones=[_gens(cone) for cone in cones])
            for (i, j), cones in system.intersections
        ],
    )


def cover_schema(witness: CoverWitness) -> CoverSchema:
    return CoverSchema(
        covered=witness.covered,
        gap_point=list(witness.gap_point) if witness.gap_point is not None else None,
        cell_count=witness.cell_count,
        target=cone_schema(witness.target) if witness.target is not None else None,
    )


def _rule_schema(step: RuleApplication) -> RuleApplicationSchema:
    return RuleApplicationSchema(
        rule=step.rule.value,
        charts=list(step.charts),
        faces=[cone_schema(face) for face in step.faces],
        vectors=[list(v) for v in step.vectors],
        lifted_from_face=step.lifted_from_face,
        rank_after=step.rank_after,
    )


def hhat_schema(result: HhatResult) -> HhatSchema:
    return HhatSchema(
        lattice=result.lattice.to_list(),
        projection=_rows(result.projection),
        codim=result.codim,
        certified=result.certified,
        trace=[_rule_schema(step) for step in result.trace],
    )


def _chain_schema(failure: ChainFailure) -> ChainFailureSchema:
    return ChainFailureSchema(
        face=cone_schema(failure.face),
        components=[[labelled_schema(label) for label in group] for group in failure.components],
    )


def separation_schema(result: SeparationResult) -> SeparationSchema:
    target = result.target_coordinates
    return SeparationSchema(
        projection=_rows(result.projection),
        codim=result.codim,
        certified=result.certified,
        quotient_fan=fan_schema(result.quotient_fan),
        class_of=list(result.class_of),
        cone_of_class=[cone_schema(cone) for cone in result.cone_of_class],
        hhat=hhat_schema(result.hhat),
        merges=[
            MergeStepSchema(kind=step.kind, classes=list(step.classes), cone=cone_schema(step.cone))
            for step in result.merges
        ],
        chain_failures=[_chain_schema(failure) for failure in result.chain_failures],
        target_coordinates=TargetCoordinatesSchema(
            matrix=_rows(target.matrix),
            change=_rows(target.change),
            quotient_fan=fan_schema(target.quotient_fan),
        )
        if target is not None
        else None,
    )


def orbit_image_schema(report: OrbitImageReport) -> OrbitImageSchema:
    return OrbitImageSchema(
        faces=[
            FaceImageSchema(
                cone=cone_schema(face.cone),
                in_image=face.in_image,
                fibre=[labelled_schema(label) for label in face.fibre],
            )
            for face in report.faces
        ],
        surjective=report.surjective,
        image_open=report.image_open,
        missing_faces=[cone_schema(cone) for cone in report.missing_faces],
    )


def _witness_schema(witness: GlueingWitness) -> GlueingWitnessSchema:
    return GlueingWitnessSchema(
        face=cone_schema(witness.face),
        chart_i=witness.chart_i,
        chart_j=witness.chart_j,
        source_i=cone_schema(witness.source_i),
        source_j=cone_schema(witness.source_j),
    )


def tp_quotient_schema(result: TpQuotientResult) -> TpQuotientSchema:
    return TpQuotientSchema(
        projection=_rows(result.projection),
        system=system_schema(result.system),
        dropped=[DroppedConeSchema(i=i, j=j, cone=cone_schema(cone)) for i, j, cone in result.dropped],
    )


def diagnosis_schema(report: DiagnosisReport, description: Optional[str] = None) -> DiagnosisReportSchema:
    return DiagnosisReportSchema(
        command="diagnose",
        description=description,
        codim=report.codim,
        av_quotient=report.av_quotient.value,
        flags=[flag.value for flag in report.flags],
        pattern=report.pattern.value,
        notes=list(report.notes),
        separation=separation_schema(report.separation),
        weak_properness=cover_schema(report.weak_properness),
        orbit_image=orbit_image_schema(report.orbit_image),
        glueing=[_witness_schema(witness) for witness in report.glueing],
    )


def render_json(report: BaseModel) -> str:
    return json.dumps(report.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"


def _vec(values) -> str:
    return "(" + ",".join(str(x) for x in values) + ")"


def _rays(rays) -> str:
    if not rays:
        return "{0}"
    return "cone(" + ", ".join(_vec(g) for g in rays) + ")"


def _cone(cone) -> str:
    text = _rays(cone.rays)
    if cone.lineality:
        text += " + span(" + ", ".join(_vec(v) for v in cone.lineality) + ")"
    return text


class TemplateLoader(BaseLoader):
    """Jinja2 loader for plain-text report templates."""

    def __init__(self):
        self.templates = get_report_templates()

    def get_source(self, environment, template):
        if template not in self.templates:
            raise KeyError(f"Template {template} not found")
        source = self.templates[template]
        return source, None, lambda: True


class ReportRenderer:
    """Renders report schemas as text, with ANSI colour when enabled."""

    def __init__(self, color: bool):
        self.env = Environment(
            loader=TemplateLoader(), undefined=StrictUndefined, keep_trailing_newline=True
        )
        self.env.filters.update(
            vec=_vec,
            fan_cone=_rays,
            cone=_cone,
            yesno=lambda flag: "yes" if flag else "no",
            heading=self._style("heading", color),
            good=self._style("good", color),
            bad=self._style("bad", color),
        )

    @staticmethod
    def _style(name: str, color: bool):
        if not color:
            return lambda text: str(text)
        return lambda text: f"{ANSI[name]}{text}{ANSI['reset']}"

    def render(self, template_name: str, report: BaseModel) -> str:
        template = self.env.get_template(template_name)
        context: Dict[str, object] = {"report": report}
        separation = getattr(report, "separation", None)
        if separation is not None:
            members: Dict[int, List[int]] = {}
            for chart, class_id in enumerate(separation.class_of):
                members.setdefault(class_id, []).append(chart)
            context["class_members"] = [members.get(k, []) for k in range(len(separation.cone_of_class))]
        return template.render(**context)


_renderers: Dict[bool, ReportRenderer] = {}


def get_report_renderer(color: Optional[bool] = None) -> ReportRenderer:
    """Get or create the renderer for the requested colour mode."""
    if color is None:
        color = settings.color_enabled
    if color not in _renderers:
        _renderers[color] = ReportRenderer(color)
    return _renderers[color]


def render_text(template_name: str, report: BaseModel, color: Optional[bool] = None) -> str:
    return get_report_renderer(color).render(template_name, report)
