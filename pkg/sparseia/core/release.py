# coding: utf-8
"""Release data for the sparseia project."""
from collections import OrderedDict

# Name of the package for release purposes.  This is the name which labels
# the tarballs and RPMs made by distutils, so it's best to lowercase it.
name = 'sparseia'

# version information.  An empty _version_extra corresponds to a full
# release.  'dev' as a _version_extra string means this is a development version
_version_major = 0
_version_minor = 1
_version_micro = ''  # use '' for first of series, number for 1 and above
#_version_extra = 'dev'
_version_extra = ''  # Uncomment this for full releases

# Construct full version string from these.
_ver = [_version_major, _version_minor]
if _version_micro: _ver.append(_version_micro)
if _version_extra: _ver.append(_version_extra)

__version__ = '.'.join(map(str, _ver))

version = __version__  # backwards compatibility name

description = "Simulator for sparse incremental aggregation in multi-hop federated learning"

long_description = \
    """
    Node-level sparse incremental aggregation algorithms, their communication cost model
    and a federated training simulator for chain topologies.
    """

license = 'GPL'

author = 'The sparseia developers'
author_email = 'nobody@nowhere'
maintainer = author
maintainer_email = author_email
authors = OrderedDict([
    ('sparseia', ('The sparseia developers', 'nobody@nowhere')),
])

url = "https://github.com/sparseia/sparseia"
download_url = url
platforms = ['Linux', 'darwin']
keywords = ["federated-learning", "gradient-sparsification", "incremental-aggregation", "multi-hop",
            "communication-cost", "error-feedback"]

classifiers = [
    "Programming Language :: Python :: 3",
    "Programming Language :: Python :: 3.8",
    "Programming Language :: Python :: 3.9",
    "Development Status :: 4 - Beta",
    "Intended Audience :: Science/Research",
    "License :: OSI Approved :: GNU General Public License v2 (GPLv2)",
    "Operating System :: OS Independent",
    "Topic :: Scientific/Engineering :: Information Analysis",
    "Topic :: Scientific/Engineering :: Artificial Intelligence",
    "Topic :: Software Development :: Libraries :: Python Modules",
]
