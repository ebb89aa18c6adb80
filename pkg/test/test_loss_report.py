# coding: utf-8

"""
    SynMatch

    Per-step loss components.
"""  # noqa: E501


import unittest

from synmatch.models.loss_report import LossReport


class TestLossReport(unittest.TestCase):
    """LossReport unit test stubs"""

    def setUp(self) -> None:
        pass

    def tearDown(self) -> None:
        pass

    def make_instance(self, include_optional: bool) -> LossReport:
        """Test LossReport
            include_optional is a boolean, when False only required
            params are included, when True both required and
            optional params are included """
        if include_optional:
            return LossReport(
                l_s=0.5,
                l_org=0.25,
                l_syn=0.125,
                l_total=0.875,
                masked_fraction=0.4,
            )
        return LossReport(
            l_s=0.5,
            l_total=0.5,
        )

    def testLossReport(self) -> None:
        """Test LossReport"""
        inst_req_only = self.make_instance(include_optional=False)
        inst_req_and_optional = self.make_instance(include_optional=True)
        self.assertEqual(inst_req_only.l_org, 0.0)
        self.assertEqual(inst_req_and_optional.to_dict()["l_total"], 0.875)

    def test_total_must_be_sum(self) -> None:
        """Test case for l_total disagreeing with its parts"""
        with self.assertRaises(ValueError):
            LossReport(l_s=0.5, l_org=0.25, l_total=0.5)

    def test_negative_component(self) -> None:
        """Test case for a negative loss value"""
        with self.assertRaises(ValueError):
            LossReport(l_s=-0.1, l_total=-0.1)

    def test_total_tensor_excluded(self) -> None:
        """Test case for the live objective staying out of serialization"""
        report = LossReport(l_s=1.0, l_total=1.0, total=object())
        self.assertNotIn("total", report.to_dict())


if __name__ == '__main__':
    unittest.main()
