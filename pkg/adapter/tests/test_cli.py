import json

from adi_adapter.cli import main


class TestCli:
    def test_segmentation_run_writes_files(self, stub_setup, capsys):
        tmp_path, image_path, seg_config, _ = stub_setup
        out = tmp_path / "out"
        code = main(["--image", str(image_path), "--config", str(seg_config), "--out", str(out)])
        assert code == 0
        assert (out / "mask.pgm").is_file()
        assert (out / "provenance.json").is_file()
        stdout = capsys.readouterr().out
        assert "mask:" in stdout

    def test_detection_run_writes_provenance(self, stub_setup):
        tmp_path, image_path, _, det_config = stub_setup
        out = tmp_path / "out"
        code = main(["--image", str(image_path), "--config", str(det_config), "--out", str(out)])
        assert code == 0
        provenance = json.loads((out / "provenance.json").read_text())
        assert provenance["model_id"] == "stub-v1"
        assert provenance["score_threshold"] == 0.5
        assert (out / "detections.json").is_file()

    def test_bad_config_exits_1(self, stub_setup, capsys):
        tmp_path, image_path, _, _ = stub_setup
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"kind": "alchemy", "checkpoint": "x"}))
        code = main(["--image", str(image_path), "--config", str(bad), "--out", str(tmp_path / "o")])
        assert code == 1
        assert "error" in capsys.readouterr().err

    def test_missing_image_exits_2(self, stub_setup, capsys):
        tmp_path, _, seg_config, _ = stub_setup
        code = main(
            [
                "--image", str(tmp_path / "nope.pgm"),
                "--config", str(seg_config),
                "--out", str(tmp_path / "o"),
            ]
        )
        assert code == 2
