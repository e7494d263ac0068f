"""Score forecast over plated game objects.

Rubric: one point per cake layer sitting on a plate of the own team,
three bonus points when the stack reads brown-yellow-pink bottom-up, one
more for a cherry on top. Pure function, order-independent.
"""

from __future__ import annotations

from .model import WorldState

LEGAL_RECIPE = ["brown", "yellow", "pink"]


def forecast_score(world: WorldState) -> int:
    own_plates = {p.id for p in world.plates if p.team == world.own_team}
    score = 0
    for cake in world.cakes:
        if cake.on_plate not in own_plates:
            continue
        score += len(cake.layers)
        if cake.layers == LEGAL_RECIPE:
            score += 3
        if cake.cherry_on_top:
            score += 1
    return score
