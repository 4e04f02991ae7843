#!/usr/bin/env python3
"""Generate a synthetic international match history for demos and tests.

The output is invented data with the same columns as a real history: it lets
the replay, fit and simulate commands run end to end without a licensed
results feed. Do not read anything into forecasts built on it.
"""

import argparse
import csv
import datetime as dt
from pathlib import Path

import numpy as np

EURO_TEAMS = {
    "Belgium": 2080, "France": 2070, "Portugal": 2010, "Spain": 2030, "Italy": 1990,
    "England": 1980, "Netherlands": 1950, "Germany": 1990, "Croatia": 1920, "Denmark": 1900,
    "Switzerland": 1860, "Sweden": 1840, "Poland": 1800, "Turkey": 1790, "Austria": 1790,
    "Wales": 1780, "Ukraine": 1780, "Czechia": 1760, "Scotland": 1730, "Hungary": 1720,
    "Russia": 1740, "Slovakia": 1710, "Finland": 1690, "North Macedonia": 1610,
}
OTHER_TEAMS = {
    "Iceland": 1750, "Norway": 1750, "Serbia": 1800, "Greece": 1730, "Ireland": 1730,
    "Northern Ireland": 1680, "Bosnia and Herzegovina": 1700, "Romania": 1720, "Israel": 1620,
    "Slovenia": 1680, "Montenegro": 1620, "Bulgaria": 1600, "Georgia": 1580, "Albania": 1600,
    "Armenia": 1530, "Belarus": 1520, "Kazakhstan": 1440, "Luxembourg": 1400,
}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", type=Path, default=Path("data/synthetic"))
    ap.add_argument("--seed", type=int, default=2021)
    ap.add_argument("--start", default="2014-01-01")
    ap.add_argument("--end", default="2021-06-07")
    ap.add_argument("--matches-per-team-year", type=float, default=10.0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    strength = {**EURO_TEAMS, **OTHER_TEAMS}
    teams = sorted(strength)
    start = dt.date.fromisoformat(args.start)
    end = dt.date.fromisoformat(args.end)
    days = (end - start).days
    n_matches = int(len(teams) * args.matches_per_team_year * days / 365.25 / 2)

    rows = []
    seen = set()
    while len(rows) < n_matches:
        a, b = rng.choice(len(teams), size=2, replace=False)
        ta, tb = teams[a], teams[b]
        date = start + dt.timedelta(days=int(rng.integers(0, days + 1)))
        if (date, ta) in seen or (date, tb) in seen:
            continue
        seen.update({(date, ta), (date, tb)})
        u = rng.random()
        if u < 0.40:
            mtype = "FRIENDLY"
        elif u < 0.75:
            mtype = "QUAL"
        elif u < 0.85 and date.year >= 2018:
            mtype = "NL"
        elif u < 0.95:
            mtype = "CONT" if date.year in (2016, 2021) else "OTHER"
        else:
            mtype = "WC" if date.year in (2014, 2018) else "OTHER"
        v = rng.random()
        venue = ta if v < 0.45 else tb if v < 0.90 else "NEUTRAL"
        # Strength drifts slowly so Elo has something to track.
        drift_a = 30 * np.sin(date.toordinal() / 400 + a)
        drift_b = 30 * np.sin(date.toordinal() / 400 + b)
        diff = (strength[ta] + drift_a - strength[tb] - drift_b) / 400
        home = 0.2 if venue == ta else -0.2 if venue == tb else 0.0
        # Gamma-mixed Poisson gives the overdispersion real scores show.
        lam_a = np.exp(0.25 + 0.75 * diff + home) * rng.gamma(8.0, 1 / 8.0)
        lam_b = np.exp(0.25 - 0.75 * diff - home) * rng.gamma(8.0, 1 / 8.0)
        ga = 0 if rng.random() < 0.04 else int(rng.poisson(lam_a))
        gb = 0 if rng.random() < 0.04 else int(rng.poisson(lam_b))
        rows.append((date.isoformat(), ta, tb, ga, gb, mtype,
                     "" if venue == "NEUTRAL" else venue, 1 if venue == "NEUTRAL" else 0))

    rows.sort()
    args.out_dir.mkdir(parents=True, exist_ok=True)
    with open(args.out_dir / "matches.csv", "w", newline="") as f:
        f.write("# SYNTHETIC match history generated by tools/synth_history.py "
                f"(seed {args.seed}); not real results.\n")
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["date", "team_a", "team_b", "goals_a", "goals_b", "match_type", "venue_country", "neutral"])
        w.writerows(rows)
    seed_date = (start - dt.timedelta(days=1)).isoformat()
    with open(args.out_dir / "seeds.csv", "w", newline="") as f:
        f.write("# SYNTHETIC seed ratings matching data/synthetic/matches.csv.\n")
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["team", "elo", "as_of"])
        for t in teams:
            w.writerow([t, int(round(strength[t] + rng.normal(0, 25))), seed_date])
    print(f"wrote {len(rows)} matches for {len(teams)} teams to {args.out_dir}")


if __name__ == "__main__":
    main()
