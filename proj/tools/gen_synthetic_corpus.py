#!/usr/bin/env python3
# Copyright 2026 The medext Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates data/synthetic_tweets.jsonl.

The corpus is small and skewed on purpose: roughly one tweet in seven
mentions a medication. Offsets are code-point indices, which is what
Python string indexing gives us.

    python3 tools/gen_synthetic_corpus.py > data/synthetic_tweets.jsonl
"""

import json
import random
import sys

SEED = 20260417
N_TWEETS = 200
N_POSITIVE = 30

# (template, drug) pairs. "{}" marks where the drug goes.
POSITIVE = [
    ("just took my {} and now waiting for it to kick in", "ibuprofen"),
    ("{}: day 3 of shots and my belly is bruised 😩", "Follistim"),
    ("doc switched me to {} for the migraines", "sumatriptan"),
    ("forgot my {} again smh", "birth control"),
    ("two {} and a nap, that's the plan", "asprin"),
    ("anyone else get weird dreams on {}?", "melatonin"),
    ("{} is the only thing that helps my nausea", "Zofran"),
    ("#LifeWithAZofranPump week two, still standing 💪", None),
    ("rubbing {} on the stretch marks every night", "Bio-oil"),
    ("the pharmacy ran out of {} 🙄", "prenatal vitamins"),
    ("ok who decided {} should taste like chalk", "Tums"),
    ("popped a {} before the flight ✈️", "Dramamine"),
    ("started {} today, fingers crossed", "metformin"),
    ("need more #{} for this headache", "tylenol"),
    ("{} made me so sleepy lol", "Benadryl"),
    ("is it safe to mix {} with coffee", "Advil"),
    ("my OB said {} is fine in the second trimester", "Unisom"),
    ("taking {} for the heartburn 🔥", "Zantac"),
    ("{} and {} every morning, living the dream", ("Prozac", "Lexapro")),
    ("finally got my {} refill", "insulin"),
]

NEGATIVE = [
    "can't sleep again, 3am thoughts 🌙",
    "baby kicked so hard today!!",
    "anyone have tips for back pain that aren't meds",
    "24 weeks today #bumpdate",
    "craving pickles and ice cream, classic",
    "the nursery is finally painted 🎨",
    "midwife appointment went great",
    "why is everyone so nice to pregnant people, I love it",
    "sciatica is no joke",
    "drank so much water today 💧",
    "glucose test tomorrow, wish me luck",
    "my feet are swollen like balloons",
    "name ideas? we're stuck between two",
    "maternity leave starts in 4 weeks!",
    "ultrasound pics are in 😍",
    "tired of being tired",
    "heartburn is real tonight",
    "went for a walk, feeling better",
    "hospital bag packed #readyornot",
    "the shots aren't fun but worth it",
    "morning sickness lasted all day",
    "registry shopping is overwhelming",
    "third trimester brain fog is real",
    "Café run before work ☕",
    "naïve me thought pregnancy would be easy",
]

FILLERS = ["", " lol", " 😂", " ugh", " #pregnancy", " #ivf", " !!", " ..."]


def make_positive(rng, i):
    template, drug = POSITIVE[i % len(POSITIVE)]
    suffix = rng.choice(FILLERS)
    if drug is None:
        text = template + suffix
        # Gold excludes the hashtag symbol itself.
        surface = "LifeWithAZofranPump"
        start = text.index(surface)
        return text, [(start, start + len(surface))]
    if isinstance(drug, tuple):
        a, b = drug
        head, mid, tail = template.split("{}")
        text = head + a + mid + b + tail + suffix
        s1 = len(head)
        s2 = s1 + len(a) + len(mid)
        return text, [(s1, s1 + len(a)), (s2, s2 + len(b))]
    head, tail = template.split("{}")
    text = head + drug + tail + suffix
    start = len(head)
    return text, [(start, start + len(drug))]


def main():
    rng = random.Random(SEED)
    positive_slots = set(rng.sample(range(N_TWEETS), N_POSITIVE))
    pos_i = 0
    out = []
    for n in range(N_TWEETS):
        tweet_id = "t%03d" % n
        user_id = "u%02d" % rng.randrange(40)
        if n in positive_slots:
            text, spans = make_positive(rng, pos_i)
            pos_i += 1
        else:
            text = rng.choice(NEGATIVE) + rng.choice(FILLERS)
            spans = []
        out.append({
            "id": tweet_id,
            "user_id": user_id,
            "text": text,
            "spans": [{"start": s, "end": e, "surface": text[s:e]} for s, e in spans],
        })
    for row in out:
        sys.stdout.write(json.dumps(row, ensure_ascii=False, separators=(",", ":")) + "\n")


if __name__ == "__main__":
    main()
