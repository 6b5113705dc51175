# Configuration file for the Sphinx documentation builder.
#
# This file only contains a selection of the most common options. For a full
# list see the documentation:
# https://www.sphinx-doc.org/en/master/usage/configuration.html

# -- Path setup --------------------------------------------------------------

import os
import sys
import shutil
sys.path.insert(0, os.path.abspath('.'))
sys.path.insert(0, os.path.abspath('../../python/'))

from builders import buildTools as bt

# -- Project information -----------------------------------------------------

project = 'fockteleport'
copyright = 'FockTeleport developers'
author = 'FockTeleport developers'

# -- Generate documentation files ---------------------------------------------

shutil.copy('../../README.rst', './')
bt.build_tools('../../python/fockteleport/', './using/tools/')

# -- General configuration ---------------------------------------------------

extensions = [
  'sphinx.ext.todo',
  'sphinx.ext.mathjax',
  'sphinx.ext.autodoc',
  'sphinx_rtd_theme',
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'
exclude_patterns = []
pygments_style = 'sphinx'

autodoc_member_order = 'bysource'
primary_domain = 'py'
highlight_language = 'python'

# -- Options for HTML output -------------------------------------------------

html_theme = 'sphinx_rtd_theme'
html_static_path = [ ]
html_domain_indices = True
html_use_index = True
html_split_index = False
html_show_sourcelink = False
html_show_sphinx = False
html_show_copyright = True
