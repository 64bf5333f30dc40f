# -*- coding: utf-8 -*-
#
# sparseia documentation build configuration file.
#
# This file is execfile()d with the current directory set to its containing dir.
from __future__ import print_function, absolute_import, unicode_literals, division

import sys
import os
import importlib.util

SPARSEIA = os.path.abspath(os.path.join(os.path.dirname(os.path.abspath(__file__)), ".."))
sys.path.insert(0, SPARSEIA)

mod_name = os.path.join(SPARSEIA, "sparseia", "core", "release.py")
_spec = importlib.util.spec_from_file_location("sparseia_release", mod_name)
relmod = importlib.util.module_from_spec(_spec)
_spec.loader.exec_module(relmod)

# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.autosummary',
    'sphinx.ext.intersphinx',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
    'sphinx.ext.napoleon',   # For Google Python Style Guide
    'sphinxarg.ext',
]

autosummary_generate = True

templates_path = ['_templates']
source_suffix = '.rst'
source_encoding = 'utf-8'
master_doc = 'index'

project = 'sparseia'
copyright = '2026, ' + relmod.author

version = relmod.__version__
release = relmod.__version__

exclude_patterns = ['_build']
pygments_style = 'sphinx'

# -- Options for HTML output ----------------------------------------------

html_theme = 'alabaster'
html_last_updated_fmt = '%b %d, %Y'
htmlhelp_basename = 'sparseiadoc'

intersphinx_mapping = {
    'python': ('https://docs.python.org/{.major}'.format(sys.version_info), None),
    'numpy': ('https://numpy.org/doc/stable/', None),
}

autodoc_member_order = "bysource"
