"""Regenerate tests/fixtures/vader_oracle.json with the reference vaderSentiment package.

Run offline once; the test-suite only reads the frozen JSON.

    pip install vaderSentiment
    python scripts/make_vader_oracle.py
"""

import json
from pathlib import Path

from vaderSentiment.vaderSentiment import SentimentIntensityAnalyzer

TITLES = [
    "This is the best goal I have ever seen",
    "Worst referee decision of the season",
    "I am not happy with this update",
    "Absolutely AMAZING performance by the band",
    "The cutest puppy you will see today!",
    "Terrible crash on the highway, everyone survived",
    "New trailer for the upcoming movie",
    "This song never gets old",
    "Really sad news about the studio closing",
    "He is so good at this game!!!",
    "Not the worst idea I have heard",
    "A very calm video of rain on a window",
    "Funny cat fails compilation",
    "Why does nobody talk about this masterpiece?",
    "The most beautiful sunset timelapse",
    "Scientists explain how black holes grow",
    "I love how angry he gets",
    "This is HORRIBLE and should be banned",
    "Incredible save by the goalkeeper",
    "Kind of disappointed by the ending",
    "Top 10 weirdest animals on earth",
    "Rare footage of the 1969 moon landing",
    "Great music to study and relax",
    "My honest review after one year",
    "They destroyed the whole city in one scene",
    "Happy birthday to the legend himself!",
    "I can't stop laughing at this",
    "The saddest moment in cartoon history",
    "Brilliant explanation of quantum computing",
    "Nothing good ever comes from this",
]

if __name__ == "__main__":
    sia = SentimentIntensityAnalyzer()
    rows = [{"title": t, **sia.polarity_scores(t)} for t in TITLES]
    out = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "vader_oracle.json"
    out.write_text(json.dumps(rows, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {len(rows)} rows to {out}")
