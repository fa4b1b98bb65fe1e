# SPDX-License-Identifier: Apache-2.0.

"""
Dimensions of graphs and ranges of self-affine random fields.
"""

__all__ = [
    'cli',
    'common',
    'exceptions',
    'fields',
    'formulas',
    'io',
    'matrix',
    'occupation',
    'svf',
]

__version__ = '1.0.0.dev0'
