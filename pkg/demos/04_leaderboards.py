"""Leaderboard arithmetic on the published 2018 challenge results.

Per dataset, submissions are ranked by mean AUC (competition ranking, ties
share the best rank).  The final score is the average rank across datasets;
equal averages fall back to total duration.  Boards from separate
competition environments merge after dropping teams that entered both.
"""

from driftbench.ranking import (
    SubmissionEntry,
    build_leaderboard,
    merge_bundles,
    render_leaderboard_csv,
)

DATASETS = ("A", "B", "C", "D", "E")

# The top feedback-phase teams with their published per-dataset AUCs and
# durations.  (The published board also counted dozens of unlisted teams,
# so published rank numbers can exceed the row count here.)
FEEDBACK = [
    ("deepsmart",       (0.5614, 0.3489, 0.6216, 0.6027, 0.8112), 6167.27),
    ("HANLAB",          (0.5344, 0.3372, 0.5815, 0.5676, 0.7848), 7289.04),
    ("Fong",            (0.5370, 0.3356, 0.5806, 0.5561, 0.7795), 6555.01),
    ("Ml-Intelligence", (0.5456, 0.3539, 0.4874, 0.5443, 0.7829), 7313.47),
    ("QQSong",          (0.5372, 0.3306, 0.5545, 0.5667, 0.7712), 6172.42),
    ("tnguyen",         (0.5294, 0.3442, 0.5683, 0.5643, 0.7532), 6936.53),
]

entries = [
    SubmissionEntry(team, "Py3", dict(zip(DATASETS, aucs)), duration)
    for team, aucs, duration in FEEDBACK
]
board = build_leaderboard(entries, DATASETS)
print("six-team feedback board:\n")
print(render_leaderboard_csv(board))

# Duration as tie-breaker: give two teams identical AUCs everywhere.
tied = [
    SubmissionEntry("tortoise", "Py3", dict(zip(DATASETS, (0.8,) * 5)), 9426.68),
    SubmissionEntry("hare", "Py3", dict(zip(DATASETS, (0.8,) * 5)), 7912.14),
]
board = build_leaderboard(tied, DATASETS)
print("identical AUCs, duration decides:")
for row in board.rows:
    print(f"   {row.position}. {row.team} ({row.duration_seconds:.2f}s)")

# Bundle merge: a team submitting to both environments is excluded.
env_a = [
    SubmissionEntry("solo", "env-a", dict(zip(DATASETS, (0.9,) * 5)), 10.0),
    SubmissionEntry("greedy", "env-a", dict(zip(DATASETS, (0.8,) * 5)), 10.0),
]
env_b = [
    SubmissionEntry("greedy", "env-b", dict(zip(DATASETS, (0.7,) * 5)), 10.0),
    SubmissionEntry("fair", "env-b", dict(zip(DATASETS, (0.6,) * 5)), 10.0),
]
merged = merge_bundles({"env-a": env_a, "env-b": env_b}, DATASETS)
print("\nmerged board (teams in both bundles removed):")
for row in merged.rows:
    print(f"   {row.position}. {row.team} [{row.bundle}]")
print("   excluded:", ", ".join(merged.excluded_teams))
