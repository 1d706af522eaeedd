"""Query-by-example talent search.

Pick one to three ideal candidates; the engine builds a structured query
from their profiles (skills ranked by inferred expertise, titles,
companies, industries), retrieves matching members from an inverted
index, and ranks them with a learned linear model over profile-similarity
and query-match features.
"""

__version__ = "0.1.0"
