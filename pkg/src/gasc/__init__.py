"""Competition harness for geometry automated theorem provers (GATPs).

Converts a corpus of geometric conjectures into per-prover input dialects,
executes provers under resource limits, adjudicates and ranks the outcomes,
renders leaderboards, and serves live competition status to polling clients.
"""

__version__ = "0.1.0"
