"""Semantic templates and generation-oriented meaning representations.

A seed verb sense plus the ontology yields a template such as
HIRE(AGENT: MANAGERIAL-ROLE, THEME: HUMAN). Instantiation substitutes
noun senses that denote the constraints exactly, sampling a bounded,
reproducible subset of the filler cross product.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from itertools import product
from typing import Mapping

from .errors import TemplateBuildError
from .lexicon import LexSense, Lexicon
from .ontology import Ontology

logger = logging.getLogger(__name__)

# generated GMRs stay within the transitive subject/object frame
TEMPLATE_ROLES = ("AGENT", "THEME")


@dataclass(frozen=True)
class SemanticTemplate:
    seed_sense_id: str
    concept: str
    role_constraints: Mapping[str, str]


@dataclass(frozen=True)
class Gmr:
    verb_sense: str
    fillers: Mapping[str, str]


def build_template(seed: LexSense, ontology: Ontology) -> SemanticTemplate:
    """Derive the case-role constraint template for a seed verb sense."""
    if seed.pos != "verb":
        raise TemplateBuildError(f"{seed.sense_id}: seed must be a verb sense, got {seed.pos}")
    concept = seed.sem_struc.concept
    slots = ontology[concept].slots
    constraints: dict[str, str] = {}
    for role in TEMPLATE_ROLES:
        if role not in slots:
            raise TemplateBuildError(f"{seed.sense_id}: {concept} has no {role} constraint")
        constraints[role] = slots[role]
    return SemanticTemplate(
        seed_sense_id=seed.sense_id, concept=concept, role_constraints=constraints
    )


def eligible_fillers(
    template: SemanticTemplate,
    lexicon: Lexicon,
    *,
    include_learned: bool = False,
    ontology: Ontology | None = None,
    use_descendants: bool = False,
) -> dict[str, list[str]]:
    """Per-role noun-sense ids eligible to fill the template, sorted.

    Eligibility is exact concept match by default; with use_descendants
    a filler whose concept is subsumed by the constraint also qualifies.
    """
    if use_descendants and ontology is None:
        raise ValueError("use_descendants requires an ontology")
    fillers: dict[str, list[str]] = {}
    for role in sorted(template.role_constraints):
        constraint = template.role_constraints[role]
        if use_descendants:
            assert ontology is not None
            matching = [
                s.sense_id
                for s in lexicon
                if s.pos == "noun"
                and (include_learned or not s.learned)
                and ontology.subsumes(constraint, s.sem_struc.concept)
            ]
            fillers[role] = sorted(matching)
        else:
            fillers[role] = [
                s.sense_id
                for s in lexicon.lexemes_denoting(constraint, "noun", include_learned)
            ]
    return fillers


def instantiate(
    template: SemanticTemplate,
    lexicon: Lexicon,
    cap: int,
    seed_rng: int,
    *,
    include_learned: bool = False,
    ontology: Ontology | None = None,
    use_descendants: bool = False,
) -> list[Gmr]:
    """Sample up to `cap` GMRs from the filler cross product, reproducibly.

    Sampling is uniform without replacement and fully determined by
    seed_rng. An empty result is not an error; the roles lacking fillers
    are reported through the log (and via eligible_fillers for callers
    that need the census).
    """
    if cap < 1:
        raise ValueError(f"cap must be >= 1, got {cap}")
    fillers = eligible_fillers(
        template,
        lexicon,
        include_learned=include_learned,
        ontology=ontology,
        use_descendants=use_descendants,
    )
    empty_roles = [role for role, ids in fillers.items() if not ids]
    if empty_roles:
        for role in empty_roles:
            logger.warning(
                "no eligible fillers for role %s (constraint %s) of %s",
                role,
                template.role_constraints[role],
                template.seed_sense_id,
            )
        return []
    roles = sorted(fillers)
    combos = list(product(*(fillers[role] for role in roles)))
    rng = random.Random(seed_rng)
    picked = rng.sample(combos, min(cap, len(combos)))
    return [
        Gmr(verb_sense=template.seed_sense_id, fillers=dict(zip(roles, combo)))
        for combo in picked
    ]
