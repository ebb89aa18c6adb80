# coding: utf-8

"""
    SynMatch

    Evaluation rows and their CSV form.
"""  # noqa: E501


import unittest

from synmatch.models.metrics_row import MetricsRow
from synmatch.models.split_tag import SplitTag


class TestMetricsRow(unittest.TestCase):
    """MetricsRow unit test stubs"""

    def setUp(self) -> None:
        pass

    def tearDown(self) -> None:
        pass

    def make_instance(self, include_optional: bool) -> MetricsRow:
        """Test MetricsRow
            include_optional is a boolean, when False only required
            params are included, when True both required and
            optional params are included """
        if include_optional:
            return MetricsRow(
                epoch=4,
                split=SplitTag.VAL,
                sample_id="img_0003",
                dsc=[0.8, 0.6],
                mean_dsc=0.7,
                asd=[1.5, 2.5],
                mean_asd=2.0,
                dice_syn_pseudo=0.9,
                dice_pseudo_gt=0.75,
                empty_pred=1,
                empty_gt=0,
            )
        return MetricsRow(
            epoch=4,
            split=SplitTag.VAL,
        )

    def testMetricsRow(self) -> None:
        """Test MetricsRow"""
        inst_req_only = self.make_instance(include_optional=False)
        inst_req_and_optional = self.make_instance(include_optional=True)
        self.assertEqual(inst_req_only.dsc, [])
        self.assertEqual(MetricsRow.from_json(inst_req_and_optional.to_json()), inst_req_and_optional)

    def test_csv_header(self) -> None:
        """Test case for per-class columns"""
        header = MetricsRow.csv_header(3)
        self.assertEqual(header[:5], ["epoch", "split", "sample_id", "mean_dsc", "mean_asd"])
        self.assertIn("dsc_2", header)
        self.assertIn("asd_1", header)
        self.assertNotIn("dsc_0", header)
        self.assertNotIn("dsc_3", header)

    def test_to_csv_row(self) -> None:
        """Test case for formatted values and blank optional cells"""
        row = self.make_instance(include_optional=True).to_csv_row()
        self.assertEqual(row["split"], "val")
        self.assertEqual(row["dsc_1"], "0.800000")
        self.assertEqual(row["asd_2"], "2.500000")
        self.assertEqual(set(row), set(MetricsRow.csv_header(3)))
        blank = self.make_instance(include_optional=False).to_csv_row()
        self.assertEqual(blank["sample_id"], "")
        self.assertEqual(blank["dice_syn_pseudo"], "")

    def test_ranges(self) -> None:
        """Test case for DSC above one and negative ASD"""
        with self.assertRaises(ValueError):
            MetricsRow(epoch=0, split=SplitTag.TEST, dsc=[1.2])
        with self.assertRaises(ValueError):
            MetricsRow(epoch=0, split=SplitTag.TEST, asd=[-1.0])


if __name__ == '__main__':
    unittest.main()
