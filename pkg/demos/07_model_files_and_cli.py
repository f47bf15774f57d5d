"""Save, reload and drive the command line tool on the bundled fixture."""
import tempfile
from pathlib import Path

from tweetsift.classifier import train_model
from tweetsift.cli import main
from tweetsift.data_io import load_model, load_tsv, model_to_bytes, save_model

fixture = Path(__file__).resolve().parents[1] / "data" / "fixture_60.tsv"
split = load_tsv(fixture)

with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    tm = train_model("rf", split.texts, split.labels, n_trees=50)
    save_model(tmp / "rf.twsf", tm)
    data = (tmp / "rf.twsf").read_bytes()
    print("file header:", data[:4], "size", len(data))
    back = load_model(tmp / "rf.twsf")
    print("canonical bytes:", model_to_bytes(back) == data)
    print("same predictions:", back.predict(split.texts) == tm.predict(split.texts))

    # the same workflow through the command line entry point
    main(["train", "--model", "svm", "--train", str(fixture), "--out", str(tmp / "svm.twsf")])
    main(["predict", "--model", str(tmp / "svm.twsf"), "--input", str(fixture), "--out", str(tmp / "pred.tsv")])
    main(["evaluate", "--gold", str(fixture), "--pred", str(tmp / "pred.tsv"), "--confusion"])

    # a corrupted file is rejected with exit code 4
    (tmp / "bad.twsf").write_bytes(data[:40])
    print("exit code:", main(["predict", "--model", str(tmp / "bad.twsf"), "--input", str(fixture),
                              "--out", str(tmp / "x.tsv")]))
