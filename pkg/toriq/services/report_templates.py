"""
Plain-text report templates, rendered by report_service through jinja2.

Filters available in templates: vec, cone, fan_cone, heading, good, bad, yesno.
"""

_SEPARATION_BODY = """\
{{ "projection" | heading }}
{% for row in sep.projection %}  {{ row | vec }}
{% endfor %}codim {{ sep.codim }}, {% if sep.certified %}{{ "certified" | good }}{% else %}{{ "not certified" | bad }}{% endif %}
{{ "quotient fan" | heading }} (rank {{ sep.quotient_fan.lattice_rank }})
{% for rays in sep.quotient_fan.maximal_cones %}  {{ rays | fan_cone }}
{% endfor %}{{ "classes" | heading }}
{% for cone in sep.cone_of_class %}  class {{ loop.index0 }}: charts {{ class_members[loop.index0] | join(", ") }} -> {{ cone | cone }}
{% endfor %}{% if sep.hhat.trace %}{{ "enlargement" | heading }}
{% for step in sep.hhat.trace %}  {{ step.rule }} on charts {{ step.charts | join(", ") }}: added {% for v in step.vectors %}{{ v | vec }}{% if not loop.last %}, {% endif %}{% endfor %} (rank {{ step.rank_after }})
{% endfor %}{% endif %}{% if sep.merges %}{{ "fan repair" | heading }}
{% for step in sep.merges %}  {{ step.kind }} {{ step.classes | join(", ") }} -> {{ step.cone | cone }}
{% endfor %}{% endif %}{% if sep.chain_failures %}{{ "chain condition" | heading }}
{% for failure in sep.chain_failures %}  {{ "fails" | bad }} over {{ failure.face | cone }}: {{ failure.components | length }} components
{% endfor %}{% endif %}{% if sep.target_coordinates %}{{ "in target coordinates" | heading }}
{% for rays in sep.target_coordinates.quotient_fan.maximal_cones %}  {{ rays | fan_cone }}
{% endfor %}{% endif %}"""

_ORBIT_BODY = """\
{{ "orbit image" | heading }}
{% for face in image.faces %}  {% if face.in_image %}{{ "hit " | good }}{% else %}{{ "miss" | bad }}{% endif %} {{ face.cone | cone }}{% if face.fibre %}  <- {% for src in face.fibre %}[{{ src.chart }}] {{ src.rays | fan_cone }}{% if not loop.last %}; {% endif %}{% endfor %}{% endif %}
{% endfor %}surjective: {{ image.surjective | yesno }}, open: {{ image.image_open | yesno }}
"""

REPORT_TEMPLATES = {
    "validate": """\
{{ "valid" | good }} {{ report.kind }} in rank {{ report.structure.lattice_rank }}
{% if report.kind == "fan" %}{% for rays in report.structure.maximal_cones %}  {{ rays | fan_cone }}
{% endfor %}{% else %}{% for rays in report.structure.charts %}  chart {{ loop.index0 }}: {{ rays | fan_cone }}
{% endfor %}{% for entry in report.structure.intersections %}  glue {{ entry.i }},{{ entry.j }}: {% for rays in entry.cones %}{{ rays | fan_cone }}{% if not loop.last %}, {% endif %}{% endfor %}
{% endfor %}{% endif %}{% if report.target %}target fan of rank {{ report.target.lattice_rank }}, charts assigned to {{ report.assignment | join(", ") }}
{% endif %}""",
    "hhat": """\
{{ "Hhat" | heading }}
lattice: {% for v in report.hhat.lattice %}{{ v | vec }}{% if not loop.last %}, {% endif %}{% endfor %}
codim {{ report.hhat.codim }}, {% if report.hhat.certified %}{{ "certified" | good }}{% else %}{{ "not certified" | bad }}{% endif %}
{% for step in report.hhat.trace %}  {{ step.rule }} on charts {{ step.charts | join(", ") }}{% for face in step.faces %} {{ face | cone }}{% endfor %}: added {% for v in step.vectors %}{{ v | vec }}{% if not loop.last %}, {% endif %}{% endfor %}
{% endfor %}non-separated pairs: {% for pair in report.non_separated_pairs %}({{ pair | join(",") }}) {% else %}none{% endfor %}
classes: {% for members in report.classes %}{ {{- members | join(",") -}} } {% endfor %}
""",
    "separation": "{% set sep = report.separation %}" + _SEPARATION_BODY,
    "tp-quotient": """\
{{ "naive TP-quotient" | heading }}
{% for row in report.tp_quotient.projection %}  {{ row | vec }}
{% endfor %}{% for rays in report.tp_quotient.system.charts %}  chart {{ loop.index0 }}: {{ rays | fan_cone }}
{% endfor %}{% for entry in report.tp_quotient.system.intersections %}  glue {{ entry.i }},{{ entry.j }}: {% for rays in entry.cones %}{{ rays | fan_cone }}{% if not loop.last %}, {% endif %}{% endfor %}
{% endfor %}{{ "dropped glueing cones" | heading }}: {{ report.tp_quotient.dropped | length }}{% if report.tp_quotient.dropped %} (not common faces of the projected charts){% endif %}
{% for item in report.tp_quotient.dropped %}  dropped at {{ item.i }},{{ item.j }}: {{ item.cone | cone }}
{% endfor %}""",
    "image": """\
{% set image = report.orbit_image %}{{ "weakly proper" | heading }}: {% if report.weak_properness.covered %}{{ "yes" | good }}{% else %}{{ "no" | bad }}, gap at {{ report.weak_properness.gap_point | vec }}{% endif %}
""" + _ORBIT_BODY,
    "diagnose": """\
{% set sep = report.separation %}{% set image = report.orbit_image %}{{ "diagnosis" | heading }}
codim {{ report.codim }}, AV-quotient: {{ report.av_quotient }}
flags: {{ report.flags | join(", ") or "none" }}
pattern: {{ report.pattern }}
{% for note in report.notes %}  - {{ note }}
{% endfor %}""" + _SEPARATION_BODY + _ORBIT_BODY + """\
{% if report.glueing %}{{ "glueing deficiency" | heading }}
{% for w in report.glueing %}  {{ w.face | cone }} from charts {{ w.chart_i }} ({{ w.source_i | cone }}) and {{ w.chart_j }} ({{ w.source_j | cone }})
{% endfor %}{% endif %}""",
    "slice-plot": """\
wrote {{ report.out }}: {{ report.regions }} regions on {{ report.hyperplane | vec }} = {{ report.level }}
""",
    "examples": """\
{% for fixture in report.fixtures %}{{ fixture.name | heading }}  {{ fixture.description }}
{% endfor %}""",
    "error": """\
{{ "error" | bad }} ({{ report.error }}): {{ report.message }}
{% for key, value in report.details | dictsort %}  {{ key }}: {{ value }}
{% endfor %}""",
}


def get_report_templates() -> dict:
    return REPORT_TEMPLATES
