"""Regenerate tests/fixtures/sari_crosscheck.json.

The 20 records below are a hand-built cross-check sample covering identity
outputs, pure deletions, pure insertions, replacements, repeated n-grams
and very short sentences.  Expected scores are computed once with the
reference-style implementation in easse_standin (F1 for all operations,
the convention used for reported scores) and frozen.

Run:  python tests/gen_sari_fixture.py
"""

import json
from pathlib import Path

from easse_standin import standin_sari

RECORDS = [
    # identity: system == source
    ("the dog barked at the mailman .",
     "the dog barked at the mailman .",
     ["the dog barked at the mailman .", "the dog barked at the mail carrier ."]),
    # system equals one reference exactly
    ("he purchased an automobile despite the exorbitant price .",
     "he bought a car despite the high price .",
     ["he bought a car despite the high price .",
      "he bought a car even though it cost a lot ."]),
    # deletion only
    ("the results were quite frankly rather surprising .",
     "the results were surprising .",
     ["the results were surprising .", "the results were very surprising ."]),
    # insertion only
    ("she plays piano .",
     "she plays the piano very well .",
     ["she plays the piano very well .", "she plays the piano ."]),
    # replacement heavy
    ("the committee convened a meeting to deliberate the proposal .",
     "the committee met to discuss the proposal .",
     ["the committee met to discuss the plan .",
      "the committee had a meeting to talk about the proposal ."]),
    # repeated tokens exercise multiset counts
    ("the the cat sat on the the mat .",
     "the cat sat on the mat .",
     ["the cat sat on the mat .", "a cat sat on a mat ."]),
    # output repeats an n-gram more often than the input
    ("a big dog and a small dog ran .",
     "a dog and a dog and a dog ran .",
     ["a big dog and a small dog ran .", "two dogs ran ."]),
    # completely wrong output
    ("the sun rises in the east .",
     "bananas are usually yellow fruits .",
     ["the sun comes up in the east .", "the sun rises in the east ."]),
    # single-word sentences
    ("hello .",
     "hi .",
     ["hi .", "hello ."]),
    # long deletion span
    ("the mayor , who had been elected by a narrow margin in a contested race , resigned .",
     "the mayor resigned .",
     ["the mayor resigned .", "the mayor quit after a close election ."]),
    # split into two clauses
    ("the storm damaged the roof and flooded the basement .",
     "the storm damaged the roof . it flooded the basement .",
     ["the storm damaged the roof . it also flooded the basement .",
      "the storm damaged the roof and flooded the basement ."]),
    # lexical simplification
    ("physicians recommend that patients utilize the medication daily .",
     "doctors say that patients should use the medicine every day .",
     ["doctors recommend that patients use the medicine daily .",
      "doctors say patients should take the medicine every day ."]),
    # reference disagreement
    ("the ancient manuscript was discovered in a monastery .",
     "the old book was found in a monastery .",
     ["the old manuscript was found in a monastery .",
      "an old document was discovered in a church ."]),
    # numbers and punctuation
    ("approximately 3,000 residents were evacuated on friday .",
     "about 3,000 people left on friday .",
     ["about 3,000 people had to leave on friday .",
      "around 3,000 residents left friday ."]),
    # system shorter than every reference
    ("the negotiations between the two countries lasted for several months .",
     "the talks lasted months .",
     ["the talks between the two countries went on for months .",
      "the negotiations lasted several months ."]),
    # system longer than source
    ("taxes rose .",
     "the taxes rose a lot last year .",
     ["taxes went up a lot last year .", "taxes rose sharply ."]),
    # overlapping but reordered
    ("in 1969 the first humans landed on the moon .",
     "the first humans landed on the moon in 1969 .",
     ["the first people landed on the moon in 1969 .",
      "in 1969 people first landed on the moon ."]),
    # two-token sentence with replacement
    ("utilize tools .",
     "use tools .",
     ["use tools .", "use the tools ."]),
    # all words deleted but one
    ("honestly it was basically just fine .",
     "fine .",
     ["it was fine .", "it was just fine ."]),
    # mixed edits
    ("the velocity of the vehicle exceeded the posted limit .",
     "the car was going faster than the speed limit .",
     ["the car went faster than the speed limit .",
      "the vehicle was faster than the limit ."]),
]


def main() -> None:
    expected = standin_sari([(s, o, refs) for s, o, refs in RECORDS], f1_deletion=True)
    fixture = {
        "convention": "corpus-level, fractional reference counts, F1 for add/keep/delete",
        "records": [
            {"source": s, "system": o, "references": refs} for s, o, refs in RECORDS
        ],
        "expected": expected,
    }
    out = Path(__file__).parent / "fixtures" / "sari_crosscheck.json"
    out.parent.mkdir(exist_ok=True)
    out.write_text(json.dumps(fixture, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {out}")
    for key, value in expected.items():
        print(f"  {key}: {value:.6f}")


if __name__ == "__main__":
    main()
