# coding: utf-8
# flake8: noqa
"""
Common test support for sparseia test scripts.

This single module should provide all the common functionality for sparseia tests
in a single location, so that test scripts can just import it and work right away.
"""
import json
import os
import unittest

import numpy as np
import numpy.testing as nptu

from monty.json import MontyDecoder, MontyEncoder

import logging
logger = logging.getLogger(__file__)

root = os.path.dirname(__file__)

__all__ = [
    "SparseiaTest",
    "TEST_FILES_DIR",
]


TEST_FILES_DIR = os.path.abspath(os.path.join(root, "..", "..", "test_files"))


class SparseiaTest(unittest.TestCase):
    """Extends TestCase with methods specific for the testing of sparse aggregation objects"""

    def assertMSONable(self, obj):
        """
        Checks that obj can be serialized to json and rebuilt with the same dictionary representation.
        Returns the rebuilt object.
        """
        s = json.dumps(obj, cls=MontyEncoder)
        new_obj = json.loads(s, cls=MontyDecoder)
        self.assertIsInstance(new_obj, obj.__class__)
        self.assertDictEqual(obj.as_dict(), new_obj.as_dict())
        return new_obj

    @staticmethod
    def assertArrayEqual(actual, desired, err_msg='', verbose=True):
        """
        Tests if two arrays are equal. The CamelCase naming is so that it is consistent with standard
        unittest methods.
        """
        return nptu.assert_equal(actual, desired, err_msg=err_msg, verbose=verbose)

    @staticmethod
    def assertArrayAlmostEqual(actual, desired, decimal=7, err_msg='', verbose=True):
        """
        Tests if two arrays are almost equal to a tolerance. The CamelCase
        naming is so that it is consistent with standard unittest methods.
        """
        return nptu.assert_almost_equal(actual, desired, decimal, err_msg, verbose)

    @staticmethod
    def assertArrayAllClose(actual, desired, rtol=1e-9, atol=1e-12, err_msg=''):
        """Tests if two arrays are equal within a relative tolerance."""
        return nptu.assert_allclose(actual, desired, rtol=rtol, atol=atol, err_msg=err_msg)

    def assertSparseEqual(self, actual, desired):
        """
        Tests if a SparseVector is equal to the expected one. desired can be a SparseVector or a dense sequence.
        """
        desired_dense = desired.to_dense() if hasattr(desired, "to_dense") else np.asarray(desired, dtype=float)
        self.assertEqual(actual.dim, len(desired_dense))
        nptu.assert_equal(actual.to_dense(), desired_dense)
        # canonical form: only nonzero values are stored
        self.assertTrue(np.all(actual.values != 0))
        self.assertTrue(np.all(np.diff(actual.indices) > 0))
