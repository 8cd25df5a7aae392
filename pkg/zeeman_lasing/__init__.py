"""
Zeeman Lasing - magnetic-field-controlled cavity transmission and
superradiant lasing of three-level atoms in a single-mode cavity.

Provides dressed-state algebra, second-order cumulant equations with a
filter-cavity spectrum, an exact small-N master-equation oracle, and a
batch CLI that writes CSV results with a run manifest.
"""

__version__ = "1.0.0"
