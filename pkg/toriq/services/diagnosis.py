"""
Diagnosis service: orbit images of toric morphisms, glueing deficiencies
of separations and the combined obstruction report.
"""
from __future__ import annotations

import itertools
import logging
from typing import List, Optional

from toriq.models.cone import Cone
from toriq.models.fan import FanMap
from toriq.models.lattice import IntMat
from toriq.models.quotient import (
    AvQuotient,
    DiagnosisFlag,
    DiagnosisReport,
    FaceImage,
    GlueingWitness,
    ObstructionPattern,
    OrbitImageReport,
    SeparationResult,
    SubtorusAction,
)
from toriq.services.cones import face_cones, image_cone, relint_contains, relint_sample
from toriq.services.covering import is_weakly_proper
from toriq.services.fans import all_cones, glueing_cones, labelled_cones, validate_fan_map
from toriq.services.quotient import tv_quotient

logger = logging.getLogger(__name__)


def _hits(P: IntMat, sigma: Cone, rho: Cone) -> bool:
    """The orbit of sigma maps into the orbit of rho."""
    return relint_contains(rho, relint_sample(image_cone(P, sigma)))


def orbit_image(fan_map: FanMap) -> OrbitImageReport:
    """
    Which target orbits the toric morphism reaches.

    The orbit of rho is hit iff some labelled source cone sigma has its
    projected relative interior inside rho's; those sigma form the fibre.
    """
    P = fan_map.matrix
    labels = labelled_cones(fan_map.source)
    faces: List[FaceImage] = []
    for rho in all_cones(fan_map.target):
        fibre = tuple(label for label in labels if _hits(P, label.cone, rho))
        faces.append(FaceImage(cone=rho, in_image=bool(fibre), fibre=fibre))

    reached = {face.cone for face in faces if face.in_image}
    missing = tuple(face.cone for face in faces if not face.in_image)
    # an orbit closure holds the orbits of the cones having it as a face
    image_open = all(all(tau in reached for tau in face_cones(rho)) for rho in reached)
    return OrbitImageReport(
        faces=tuple(faces),
        surjective=not missing,
        image_open=image_open,
        missing_faces=missing,
    )


def _first_source(P: IntMat, chart: Cone, rho: Cone) -> Optional[Cone]:
    return next((sigma for sigma in face_cones(chart) if _hits(P, sigma, rho)), None)


def glueing_deficiency(action: SubtorusAction, separation: SeparationResult) -> List[GlueingWitness]:
    """Quotient orbits reached from charts i and j but from no cone glueing them."""
    P = separation.projection
    system = action.space
    witnesses: List[GlueingWitness] = []
    for rho in all_cones(separation.quotient_fan):
        for i, j in itertools.combinations(range(len(system.charts)), 2):
            source_i = _first_source(P, system.charts[i], rho)
            if source_i is None:
                continue
            source_j = _first_source(P, system.charts[j], rho)
            if source_j is None:
                continue
            if any(_hits(P, sigma, rho) for sigma in glueing_cones(system, i, j)):
                continue
            witnesses.append(
                GlueingWitness(face=rho, chart_i=i, chart_j=j, source_i=source_i, source_j=source_j)
            )
    logger.debug("%d glueing deficiency witnesses", len(witnesses))
    return witnesses


def _notes(codim, weak, image, glueing) -> List[str]:
    notes = []
    if codim <= 2:
        notes.append(
            f"The quotient torus has dimension {codim}, so the TV-quotient is also "
            "the categorical quotient among algebraic varieties."
        )
    else:
        notes.append(
            f"The quotient torus has dimension {codim}; the enlargement fixpoint is "
            "not certified to be maximal in this range."
        )
    if not weak.covered:
        point = ",".join(str(x) for x in weak.gap_point)
        notes.append(f"The projected support misses ({point}); the quotient map is not weakly proper.")
    if not image.image_open:
        missing = "; ".join(str(cone) for cone in image.missing_faces)
        notes.append(f"The orbits of {missing} are not reached and the image is not open.")
    for witness in glueing:
        notes.append(
            f"The orbit of {witness.face} is reached from charts {witness.chart_i} and "
            f"{witness.chart_j} (through {witness.source_i} and {witness.source_j}) "
            "but from no cone of their common part."
        )
    return notes


def diagnose(action: SubtorusAction) -> DiagnosisReport:
    """
    Combinatorial facts about the TV-quotient of an action on a fan.

    States which obstruction pattern the facts match; it never claims that
    a quotient in a larger category fails to exist.
    """
    separation = tv_quotient(action)
    fan_map = validate_fan_map(separation.projection, action.space, separation.quotient_fan)
    weak = is_weakly_proper(fan_map)
    image = orbit_image(fan_map)
    glueing = glueing_deficiency(action, separation)
    codim = separation.hhat.codim

    flags = []
    if not weak.covered:
        flags.append(DiagnosisFlag.NOT_WEAKLY_PROPER)
    if not image.image_open:
        flags.append(DiagnosisFlag.IMAGE_NOT_OPEN)
    if glueing:
        flags.append(DiagnosisFlag.GLUEING_DEFICIENCY)

    if DiagnosisFlag.NOT_WEAKLY_PROPER in flags or DiagnosisFlag.IMAGE_NOT_OPEN in flags:
        pattern = ObstructionPattern.NON_OPEN_IMAGE
    elif glueing:
        pattern = ObstructionPattern.UNGLUED_IDENTIFICATION
    else:
        pattern = ObstructionPattern.NONE

    logger.info("diagnosis: codim %d, flags %s", codim, [flag.value for flag in flags])
    return DiagnosisReport(
        codim=codim,
        av_quotient=AvQuotient.EXISTS_EQUALS_TV if codim <= 2 else AvQuotient.UNKNOWN,
        flags=tuple(flags),
        pattern=pattern,
        separation=separation,
        weak_properness=weak,
        orbit_image=image,
        glueing=tuple(glueing),
        notes=tuple(_notes(codim, weak, image, glueing)),
    )
