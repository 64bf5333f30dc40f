#!/usr/bin/env python
"""
Command line interface of the sparse incremental aggregation simulator.
"""
from __future__ import print_function, division, unicode_literals

import sys

from sparseia.experiments.cli import main


if __name__ == "__main__":
    retcode = 0
    do_prof = False
    try:
        do_prof = sys.argv[1] == "prof"
        if do_prof: sys.argv.pop(1)
    except IndexError:
        pass

    if do_prof:
        import pstats, cProfile
        cProfile.runctx("retcode = main()", globals(), locals(), "Profile.prof")
        s = pstats.Stats("Profile.prof")
        s.strip_dirs().sort_stats("time").print_stats()
    else:
        retcode = main()

    sys.exit(retcode)
