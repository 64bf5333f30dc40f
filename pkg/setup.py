#!/usr/bin/env python
# flake8: noqa
"""Setup script for sparseia."""

import sys
import os
import shutil

from glob import glob
from setuptools import find_packages, setup

#---------------------------------------------------------------------------
# Basic project information
#---------------------------------------------------------------------------


# release.py contains version, authors, license, url, keywords, etc.
release_file = os.path.join('sparseia', 'core', 'release.py')

with open(release_file) as f:
    code = compile(f.read(), release_file, 'exec')
    exec(code)

#---------------------------------------------------------------------------
# Find scripts
#---------------------------------------------------------------------------

def find_scripts():
    """Find sparseia scripts."""
    scripts = []
    # All python files in sparseia/scripts
    pyfiles = glob(os.path.join('sparseia', 'scripts', "*.py"))
    scripts.extend(pyfiles)
    return scripts


def get_long_desc():
    with open("README.rst") as f:
        return f.read()


#-----------------------------------------------------------------------------
# Function definitions
#-----------------------------------------------------------------------------

def cleanup():
    """Clean up the junk left around by the build process."""

    if "develop" not in sys.argv:
        try:
            shutil.rmtree('sparseia.egg-info')
        except Exception:
            try:
                os.unlink('sparseia.egg-info')
            except Exception:
                pass

# List of external packages we rely on.
# Note setup install will download them from Pypi if they are not available.


install_requires = [
"six",
"numpy>=1.17",
"monty",
"prettytable",
]

tests_require = [
"pytest",
"pytest-cov",
"pytest-xdist",
]

#---------------------------------------------------------------------------
# Find all the packages and scripts
#---------------------------------------------------------------------------

# Get the set of packages to be included.
my_packages = find_packages(exclude=())

my_scripts = find_scripts()

# Create a dict with the basic information
# This dict is eventually passed to setup after additional keys are added.
setup_args = dict(
      name=name,
      version=version,
      description=description,
      long_description=get_long_desc(),
      author=author,
      author_email=author_email,
      url=url,
      license=license,
      platforms=platforms,
      keywords=keywords,
      classifiers=classifiers,
      install_requires=install_requires,
      tests_require=tests_require,
      extras_require={"test": tests_require},
      packages=my_packages,
      scripts=my_scripts,
      python_requires=">=3.6",
      )


if __name__ == "__main__":
    setup(**setup_args)
    cleanup()
