"""Heuristic mode recommendations for the eight skill/energy/time
scenarios, extended by LLM trust and whether content was reviewed.

The rules encode observed majority patterns: full parental capacity
favors parent takeover with the generated content as a resource; low
energy with free time favors collaboration or supervised robot takeover;
absent parents hand over to the robot only when they trust the content
or have already reviewed it, and otherwise avoid the system. Ties break
toward the mode keeping the parent more involved.

The full table ships as package data and ``recommend_mode`` must agree
with it row for row; ``build_rule_table`` regenerates the data file.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from itertools import product

from paired.session import Level, Mode, SETScenario

AVOID = "avoid"


@dataclass(frozen=True)
class Recommendation:
    choice: str  # a Mode value or "avoid"
    tag: str

    def to_dict(self) -> dict:
        return {"choice": self.choice, "tag": self.tag}


def _collaboration_tag(scenario: SETScenario) -> str:
    if scenario.skill is Level.LOW:
        return "delegate-quizzes-and-weak-spots-to-robot"
    return "parent-leads-strengths-robot-adds-engagement"


def recommend_mode(scenario: SETScenario) -> list[Recommendation]:
    """Rank modes (or avoidance) for one scenario. Pure and deterministic."""
    recs: list[Recommendation] = []
    if scenario.time is Level.HIGH:
        if scenario.energy is Level.HIGH:
            recs.append(Recommendation(Mode.PARENT_TAKEOVER.value, "parent-has-capacity-content-as-resource"))
            recs.append(Recommendation(Mode.PARENT_LED.value, _collaboration_tag(scenario)))
            recs.append(Recommendation(Mode.ROBOT_LED.value, _collaboration_tag(scenario)))
        else:
            recs.append(Recommendation(Mode.ROBOT_LED.value, "offload-leadership-" + _collaboration_tag(scenario)))
            recs.append(Recommendation(Mode.ROBOT_TAKEOVER.value, "supervise-from-nearby"))
            recs.append(Recommendation(Mode.PARENT_LED.value, "light-touch-involvement"))
    else:
        if scenario.trust_llm is Level.HIGH:
            recs.append(Recommendation(Mode.ROBOT_TAKEOVER.value, "independent-use-trusted-content"))
            if scenario.energy is Level.HIGH:
                recs.append(Recommendation(Mode.ROBOT_LED.value, "brief-shared-start-before-leaving"))
        elif scenario.content_reviewed:
            recs.append(Recommendation(Mode.ROBOT_TAKEOVER.value, "reviewed-content-only"))
        else:
            recs.append(Recommendation(AVOID, "low-trust-unreviewed-content"))
    return recs


def _row_key(scenario: SETScenario) -> str:
    return ",".join(
        [
            scenario.skill.value,
            scenario.energy.value,
            scenario.time.value,
            scenario.trust_llm.value,
            "reviewed" if scenario.content_reviewed else "unreviewed",
        ]
    )


def all_scenarios() -> list[SETScenario]:
    """The 32 recommender rows: 8 SET combinations x trust x reviewed."""
    rows = []
    for skill, energy, time_, trust, reviewed in product(
        Level, Level, Level, Level, (True, False)
    ):
        rows.append(SETScenario(skill=skill, energy=energy, time=time_, trust_llm=trust, content_reviewed=reviewed))
    return rows


def build_rule_table() -> dict[str, list[dict]]:
    return {_row_key(s): [r.to_dict() for r in recommend_mode(s)] for s in all_scenarios()}


def shipped_rule_table() -> dict[str, list[dict]]:
    """The frozen table bundled as package data."""
    text = resources.files("paired").joinpath("data/mode_rules.json").read_text()
    return json.loads(text)


def lookup(scenario: SETScenario) -> list[dict]:
    return shipped_rule_table()[_row_key(scenario)]


def format_table() -> str:
    """Human-readable table dump for the CLI."""
    lines = ["skill,energy,time,trust,reviewed -> ranked recommendations"]
    for key, recs in sorted(shipped_rule_table().items()):
        ranked = "; ".join(f"{r['choice']} ({r['tag']})" for r in recs)
        lines.append(f"{key} -> {ranked}")
    return "\n".join(lines)
