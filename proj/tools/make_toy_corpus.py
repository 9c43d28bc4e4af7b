#!/usr/bin/env python3
"""Writes the bundled toy story corpus and prompt list.

The stories are built from a small grammar of children's-story sentences, so
the output is fully determined by --seed. Every word of the bundled prompts
occurs in the corpus.
"""

import argparse
import random
from pathlib import Path

NAMES = ["Lily", "Tom", "Kitty", "Roxy", "Billy", "Daisy", "Max", "Sue", "Ben", "Mia"]
ANIMALS = ["cat", "dog", "bird", "cow", "bunny", "duck", "frog", "fox"]
PLACES = ["park", "garden", "forest", "pond", "hill", "beach", "farm", "yard"]
THINGS = ["ball", "box", "kite", "toy", "flower", "stick", "shell", "book", "treasure", "candle"]
ADJS = ["big", "small", "red", "shiny", "bright", "soft", "tiny", "old", "pretty", "lost", "hidden", "icy"]
FEELINGS = ["happy", "sad", "scared", "excited", "proud", "tired", "thirsty", "curious"]
FAMILY = ["mother", "mom", "dad", "daughter", "friend", "sister", "brother"]

OPENINGS = [
    "Once upon a time, there was a {adj} {animal} named {name}.",
    "One day, {name} went to the {place} with {pron_obj} {family}.",
    "{name} was a {feel} little {animal} who loved to play.",
    "Once upon a time, {name} and {name2} loved to play together.",
]

MIDDLES = [
    "{name} found a {adj} {thing} near the {place}.",
    "{name} saw a {adj} {animal} by the {place}.",
    "{Pron} wanted to play with the {thing}.",
    "{name} and {name2} played with the {thing} all day.",
    "The {animal} was {feel} and wanted a friend.",
    "{name} climbed the {adj} hill, seeking the hill's peak.",
    "Leaves underfoot, {name} ascended triumphantly.",
    "Thirsty, they sought a hidden pond.",
    "{name}'s idea sparked an unlikely friendship.",
    "{name}'s playful antics delighted tiny {name2}.",
    "{name}'s thoughtful gesture warmed her {family}.",
    "A candle's flame united {family}, {family2}.",
    "The sad cow wished for companionship.",
    "{name}, small yet happy, met {name2}.",
    "{name} said, \"Can I play with you?\"",
    "\"Yes, you can!\" said {name2}.",
    "They ran to the {place} and looked for the {thing}.",
    "{Pron} was very {feel} when {pron} found it.",
    "{name} gave the {thing} to {name2}.",
    "They laughed and played until the sun went down.",
    "{name} did not want to share the {thing}.",
    "Then {name} felt {feel} and said sorry.",
    "The {animal} jumped over the {adj} {thing}.",
    "{name} looked at the {adj} sky and smiled.",
]

ENDINGS = [
    "From that day on, {name} and {name2} were best friends.",
    "{name} was very {feel} and went home to sleep.",
    "They learned that sharing is good.",
    "The end.",
    "{name} hugged {pron_obj} {family} and said thank you.",
]


def fill(template, rng, cast):
    return template.format(
        name=cast["name"], name2=cast["name2"],
        Pron=cast["pron"].capitalize(), pron=cast["pron"], pron_obj=cast["pron_obj"],
        adj=rng.choice(ADJS), animal=rng.choice(ANIMALS), place=rng.choice(PLACES),
        thing=rng.choice(THINGS), feel=rng.choice(FEELINGS),
        family=rng.choice(FAMILY), family2=rng.choice(FAMILY),
    )


def story(rng):
    name, name2 = rng.sample(NAMES, 2)
    she = name in {"Lily", "Kitty", "Roxy", "Daisy", "Sue", "Mia"}
    cast = {"name": name, "name2": name2, "pron": "she" if she else "he",
            "pron_obj": "her" if she else "his"}
    sentences = [fill(rng.choice(OPENINGS), rng, cast)]
    for _ in range(rng.randint(4, 9)):
        sentences.append(fill(rng.choice(MIDDLES), rng, cast))
    sentences.append(fill(rng.choice(ENDINGS), rng, cast))
    return " ".join(sentences)


PROMPTS = [
    "Kitty found a bright, lost treasure.",
    "Thirsty, they sought a hidden pond.",
    "Roxy climbed, seeking icy hill's peak.",
    "Billy's idea sparked an unlikely friendship.",
    "Leaves underfoot, Roxy ascended triumphantly.",
    "Daisy, small yet happy, met Max.",
    "Max's playful antics delighted tiny Daisy.",
    "Sue's thoughtful gesture warmed her mother.",
    "A candle's flame united mother, daughter.",
    "The sad cow wished for companionship.",
]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "data")
    parser.add_argument("--stories", type=int, default=2500)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    text = "\n\n".join(story(rng) for _ in range(args.stories)) + "\n"
    args.out.mkdir(parents=True, exist_ok=True)
    (args.out / "toy_stories.txt").write_text(text, encoding="utf-8")
    (args.out / "prompts.txt").write_text("\n".join(PROMPTS) + "\n", encoding="utf-8")
    print(f"{args.stories} stories, {len(text.encode())} bytes")


if __name__ == "__main__":
    main()
