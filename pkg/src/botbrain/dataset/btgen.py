"""Instruction-tuning corpus of (command, behavior tree) pairs.

Generation is a pure function of (n, seed, paraphrase hook): every sample
index derives its own RNG, so the corpus can be produced in any order or
in parallel. The paraphrase hook rewrites the command surface text only;
trees are never touched.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from ..bt import serialize_xml
from ..strategy import SYSTEM_PROMPT, expand_command, random_command

Paraphraser = Callable[[str], str]


@dataclass(frozen=True)
class BtSample:
    instruction: str
    output: str  # strategy XML

    def to_record(self) -> dict:
        return {"instruction": self.instruction, "input": "", "output": self.output}


def _sample_rng(seed: int, index: int) -> random.Random:
    return random.Random(f"bt:{seed}:{index}")


def generate_bt_sample(seed: int, index: int, paraphraser: Paraphraser | None = None) -> BtSample:
    rng = _sample_rng(seed, index)
    cmd = random_command(rng)
    text = paraphraser(cmd.text) if paraphraser else cmd.text
    return BtSample(
        instruction=SYSTEM_PROMPT + "\n\n" + text,
        output=serialize_xml(expand_command(cmd)),
    )


def generate_bt_corpus(
    n: int, seed: int = 0, paraphraser: Paraphraser | None = None
) -> list[BtSample]:
    if n < 1:
        raise ValueError("n must be at least 1")
    return [generate_bt_sample(seed, i, paraphraser) for i in range(n)]
