"""Regenerates the synthetic demo datasets in this directory.

Two studies, 200 samples each:
  summary/  4-point Likert ratings; models agree closely with each other.
  triage/   open/closed/unknown labels; models disagree with each other but
            are reliable when confident.
"""

import csv
import json
import random
from pathlib import Path

HERE = Path(__file__).resolve().parent
SAMPLES = 200


def write_scale(path, kind, labels):
    path.write_text(json.dumps({"kind": kind, "labels": labels}, indent=2) + "\n")


def study(name, labels, human_noise, models, seed):
    rng = random.Random(seed)
    latent = [rng.randrange(len(labels)) for _ in range(SAMPLES)]
    sample_ids = [f"{name}-{i:03d}" for i in range(SAMPLES)]
    out = HERE / name
    out.mkdir(exist_ok=True)

    with open(out / "humans.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["sample_id", "rater_id", "rater_kind", "label", "confidence"])
        for s, truth in zip(sample_ids, latent):
            for h in range(3):
                label = truth if rng.random() >= human_noise else rng.randrange(len(labels))
                w.writerow([s, f"annotator{h + 1}", "human", labels[label], ""])

    with open(out / "models.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["sample_id", "rater_id", "rater_kind", "label", "confidence"])
        for model, accuracy in models:
            for s, truth in zip(sample_ids, latent):
                label = truth if rng.random() < accuracy else rng.randrange(len(labels))
                if label == truth:
                    confidence = 0.80 + 0.19 * rng.random()
                else:
                    confidence = 0.35 + 0.45 * rng.random()
                w.writerow([s, model, "model", labels[label], f"{confidence:.4f}"])


def main():
    likert = ["Strongly disagree", "Disagree", "Agree", "Strongly agree"]
    write_scale(HERE / "likert4.scale.json", "ordinal", likert)
    study("summary", likert, 0.25, [("gpt-4", 0.9), ("claude", 0.88), ("gemini", 0.85)], seed=11)

    triage = ["open", "closed", "unknown"]
    write_scale(HERE / "triage.scale.json", "nominal", triage)
    study("triage", triage, 0.2, [("gpt-4", 0.55), ("claude", 0.5), ("gemini", 0.45)], seed=12)


if __name__ == "__main__":
    main()
