"""Resource ceilings.

Degrees and crossing numbers above these caps raise ResourceCapExceeded
instead of silently grinding; the CLI maps that to exit code 3.
"""

DEGREE_CAP = 6           # max chord diagram degree for enumeration/quotients
DOUBLE_POINT_CAP = 6     # max double points for knot-side evaluation
SKEIN_CROSSING_CAP = 16  # max classical crossings fed to the skein engine


class ResourceCapExceeded(Exception):
    pass
