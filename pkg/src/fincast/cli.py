"""``fincast`` command line.

Exit codes: 0 ok, 2 data/parse error, 3 singular ARIMA fit, 4 insufficient
data, 5 model-file error, 6 chat backend error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import os
import sys
import time
from datetime import date, datetime, timedelta
from pathlib import Path

import numpy as np

from . import __version__, arima, ingest, lstm, metrics, plot, preprocess
from .errors import (BackendError, ChecksumError, DegenerateRange, FincastError,
                     FormatVersionError, HttpStatusError, InsufficientData, ModelIOError,
                     NetworkError, NoData, ParseError, SingularDesign)

log = logging.getLogger("fincast")

EXIT_OK = 0
EXIT_DATA = 2
EXIT_SINGULAR = 3
EXIT_INSUFFICIENT = 4
EXIT_MODEL = 5
EXIT_BACKEND = 6


class CliFailure(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


# -- helpers ------------------------------------------------------------------

def _sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _out_dir(args) -> Path:
    name = args.tag or datetime.now().strftime("%Y%m%dT%H%M%S")
    base = Path(args.out_root) / args.command_path
    out = base / name
    k = 1
    while not args.tag and out.exists():
        out = base / f"{name}-{k}"
        k += 1
    out.mkdir(parents=True, exist_ok=True)
    return out


def _series_csv(dates, values) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "date", "value"])
    for i, (d, v) in enumerate(zip(dates, values), start=1):
        w.writerow([i, d.isoformat(), repr(float(v))])
    return buf.getvalue()


def _write(out: Path, name: str, text: str, outputs: list) -> Path:
    path = out / name
    path.write_text(text, encoding="utf-8", newline="\n")
    outputs.append(str(path))
    return path


def _metrics_json(report) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"


def _manifest(args, out: Path, outputs, inputs, seeds, warnings, started) -> None:
    config = {k: v for k, v in vars(args).items() if k not in ("func", "api_key")}
    doc = {
        "fincast_version": __version__,
        "subcommand": args.command_path,
        "config": config,
        "seeds": seeds,
        "inputs": {str(p): _sha256(p) for p in inputs},
        "outputs": list(outputs),
        "warnings": list(warnings),
        "wall_clock_seconds": round(time.perf_counter() - started, 3),
    }
    path = out / "manifest.json"
    path.write_text(json.dumps(doc, indent=2, sort_keys=True, default=str) + "\n", encoding="utf-8")


def _load_ohlcv(path) -> ingest.OhlcvSeries:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliFailure(EXIT_DATA, f"cannot read {path}: {exc}") from exc
    try:
        return ingest.parse_yahoo_csv(text)
    except (ParseError, NoData) as exc:
        raise CliFailure(EXIT_DATA, f"{path}: {exc}") from exc


def _next_business_days(last: date, n: int) -> list[date]:
    days, d = [], last
    while len(days) < n:
        d += timedelta(days=1)
        if d.weekday() < 5:
            days.append(d)
    return days


# -- inflation ----------------------------------------------------------------

def cmd_inflation(args) -> int:
    started = time.perf_counter()
    inputs, warnings, outputs = [], [], []
    try:
        order = arima.ArimaOrder.parse(args.order)
    except (ValueError, TypeError) as exc:
        raise CliFailure(EXIT_DATA, f"bad --order {args.order!r}: {exc}") from exc
    try:
        if args.from_json:
            body = Path(args.from_json).read_bytes()
            inputs.append(args.from_json)
        else:
            body = ingest.fetch_worldbank_series(args.country, args.indicator, base_url=args.base_url)
        series = ingest.resample_annual(ingest.parse_worldbank_json(body))
    except (OSError, NetworkError, HttpStatusError, ParseError, NoData) as exc:
        raise CliFailure(EXIT_DATA, f"cannot load inflation data: {exc}") from exc

    try:
        model = arima.fit(series, order)
        fc = arima.forecast(model, series, args.horizon)
        actual, fitted = arima.one_step_fitted(model, series)
    except SingularDesign as exc:
        raise CliFailure(EXIT_SINGULAR, f"ARIMA fit failed: {exc}") from exc
    except InsufficientData as exc:
        raise CliFailure(EXIT_DATA, f"ARIMA fit failed: {exc}") from exc
    warnings.extend(model.warnings)

    try:
        report = metrics.evaluate(actual, fitted)
    except FincastError as exc:
        raise CliFailure(EXIT_DATA, f"cannot score fit: {exc}") from exc

    out = _out_dir(args)
    _write(out, "history.csv", _series_csv(series.dates, series.values), outputs)
    _write(out, "forecast.csv", _series_csv(fc.horizon_dates, fc.values), outputs)
    label = args.country if not args.from_json else Path(args.from_json).stem
    _write(out, "inflation.svg",
           plot.history_forecast_plot(series, fc, title=f"Inflation ({label}): history and "
                                      f"ARIMA({order.p},{order.d},{order.q}) forecast"), outputs)
    _write(out, "metrics.json", _metrics_json(report), outputs)
    _manifest(args, out, outputs, inputs, {}, warnings, started)

    for d, v in zip(fc.horizon_dates, fc.values):
        print(f"{d.year}: {v:.2f}%")
    print(f"in-sample one-step MAE {report.mae:.3f}, RMSE {report.rmse:.3f} (n={report.n})")
    print(f"outputs in {out}")
    return EXIT_OK


# -- stock ----------------------------------------------------------------------

def cmd_stock_train(args) -> int:
    started = time.perf_counter()
    outputs = []
    closes = ingest.close_series(_load_ohlcv(args.csv))
    values = closes.values
    try:
        n_windows = len(values) - args.lookback
        if n_windows < 2:
            raise InsufficientData(f"{len(values)} closes cannot form 2+ windows of {args.lookback}")
        if args.fit_scaler_on_train:
            cut = int(np.floor(args.split * n_windows + 1e-9))
            scaler = preprocess.fit_scaler(values[:cut + args.lookback])
        else:
            scaler = preprocess.fit_scaler(values)
        windows = preprocess.make_windows(scaler.transform(values), args.lookback)
        split = preprocess.chrono_split(windows, args.split)
    except InsufficientData as exc:
        raise CliFailure(EXIT_INSUFFICIENT, str(exc)) from exc
    except DegenerateRange as exc:
        raise CliFailure(EXIT_DATA, str(exc)) from exc

    net = lstm.init_network(args.seed, hidden=args.hidden, dropout_rate=args.dropout, lookback=args.lookback)
    config = lstm.TrainConfig(epochs=args.epochs, batch_size=args.batch, learning_rate=args.lr,
                              shuffle_seed=args.seed)
    report = lstm.train(net, split, config,
                        progress=lambda e, l: log.info("epoch %d/%d loss %.6f", e, config.epochs, l))
    mreport = lstm.evaluate(net, split, scaler)

    out = _out_dir(args)
    model_path = Path(args.model_out) if args.model_out else out / "model.fincast"
    lstm.save_model(net, scaler, model_path)
    outputs.append(str(model_path))
    _write(out, "metrics.json", _metrics_json(mreport), outputs)
    test_dates = closes.dates[args.lookback + len(split.train):]
    predicted = scaler.inverse_transform(net.predict(split.test.inputs))
    actual = scaler.inverse_transform(split.test.targets)
    _write(out, "actual_vs_predicted.svg",
           plot.actual_vs_predicted_plot(actual, predicted, test_dates,
                                         title=f"{Path(args.csv).stem}: actual vs predicted close"), outputs)
    _manifest(args, out, outputs, [args.csv], {"init": args.seed, "shuffle": args.seed}, [], started)

    print(f"params {lstm.param_count(net)}; epoch losses "
          + ", ".join(f"{l:.6f}" for l in report.epoch_losses))
    print(f"MAE {mreport.mae:.2f}  MSE {mreport.mse:.2f}  RMSE {mreport.rmse:.2f}  R2 {mreport.r2:.4f}")
    print(f"outputs in {out}")
    return EXIT_OK


def cmd_stock_predict(args) -> int:
    started = time.perf_counter()
    outputs = []
    try:
        net, scaler = lstm.load_model(args.model)
    except (ModelIOError, ChecksumError, FormatVersionError) as exc:
        raise CliFailure(EXIT_MODEL, f"{type(exc).__name__}: {exc}") from exc
    closes = ingest.close_series(_load_ohlcv(args.csv))
    if len(closes) < net.lookback:
        raise CliFailure(EXIT_INSUFFICIENT, f"{len(closes)} closes, model needs {net.lookback}")
    if args.days < 0:
        raise CliFailure(EXIT_DATA, "--days must be non-negative")
    window = scaler.transform(closes.values[-net.lookback:])
    prices = lstm.future_forecast(net, scaler, window, args.days)
    dates = _next_business_days(closes.dates[-1], args.days)

    out = _out_dir(args)
    _write(out, "forecast.csv", _series_csv(dates, prices), outputs)
    _manifest(args, out, outputs, [args.model, args.csv], {}, [], started)
    if prices:
        print("Predicted Future Stock Prices:")
    for k, p in enumerate(prices, start=1):
        print(f"Day {k}: ${p:.2f}")
    return EXIT_OK


# -- chat -----------------------------------------------------------------------

def cmd_chat(args) -> int:
    from . import agents

    started = time.perf_counter()
    outputs = []
    if args.stub:
        try:
            backend = agents.ScriptedBackend.from_file(args.stub)
        except (OSError, ValueError, KeyError) as exc:
            raise CliFailure(EXIT_BACKEND, f"cannot load stub {args.stub}: {exc}") from exc
    elif args.echo:
        backend = agents.EchoBackend()
    elif args.endpoint:
        key = args.api_key or os.environ.get(agents.backends.API_KEY_ENV)
        backend = agents.http_chat_backend(args.endpoint, args.model, key, temperature=args.temperature)
    else:
        raise CliFailure(EXIT_BACKEND, "no chat backend: pass --endpoint URL (key in "
                                       f"${agents.backends.API_KEY_ENV}) or --stub replies.json")

    inputs = {"question": args.question, "person": args.person}
    if args.url:
        inputs["url"] = args.url
    try:
        run = agents.run_crew(agents.DEFAULT_AGENTS, agents.DEFAULT_TASKS, backend,
                              {agents.SCRAPE_TOOL: agents.scrape_website}, inputs)
    except BackendError as exc:
        raise CliFailure(EXIT_BACKEND, f"chat backend error: {exc}") from exc

    for entry in run.entries:
        print(f"# Agent: {entry.agent_role}")
        print(f"## Task: {entry.task_id}")
        for call in entry.tool_invocations:
            status = f"failed: {call.error}" if call.error else f"{call.chars} chars"
            print(f"## Tool: {call.tool}({call.url}) -> {status}")
        print(f"## Answer:\n{entry.reply}\n")
    print(f"# Final answer\n{run.final_answer}")

    out = _out_dir(args)
    _write(out, "transcript.jsonl", run.to_jsonl(), outputs)
    _manifest(args, out, outputs, [args.stub] if args.stub else [], {}, [], started)
    return EXIT_OK


# -- parser ---------------------------------------------------------------------

def _common(p):
    p.add_argument("--out-root", default="out", help="root of the output tree (default: out)")
    p.add_argument("--tag", help="output subdirectory name (default: timestamp)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fincast", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"fincast {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("inflation", help="ARIMA inflation forecast from World Bank data")
    p.add_argument("--country", default="IN", help="ISO country code (default: IN)")
    p.add_argument("--indicator", default=ingest.DEFAULT_INDICATOR)
    p.add_argument("--from-json", help="read a saved World Bank response instead of fetching")
    p.add_argument("--base-url", default=ingest.WORLDBANK_BASE_URL)
    p.add_argument("--order", default="15,1,0", help="p,d,q with q=0 (default: 15,1,0)")
    p.add_argument("--horizon", type=int, default=10)
    _common(p)
    p.set_defaults(func=cmd_inflation, command_path="inflation")

    stock = sub.add_parser("stock", help="LSTM stock-price model").add_subparsers(dest="stock_command",
                                                                                  required=True)
    t = stock.add_parser("train", help="train on a Yahoo CSV and score the held-out tail")
    t.add_argument("--csv", required=True)
    t.add_argument("--lookback", type=int, default=60)
    t.add_argument("--split", type=float, default=0.8)
    t.add_argument("--epochs", type=int, default=10)
    t.add_argument("--batch", type=int, default=32)
    t.add_argument("--lr", type=float, default=1e-3)
    t.add_argument("--hidden", type=int, default=50)
    t.add_argument("--dropout", type=float, default=0.2)
    t.add_argument("--seed", type=int, default=42)
    t.add_argument("--fit-scaler-on-train", action="store_true",
                   help="fit min/max on the training span only (default: whole series)")
    t.add_argument("--model-out", help="model file path (default: <out>/model.fincast)")
    _common(t)
    t.set_defaults(func=cmd_stock_train, command_path="stock-train")

    pr = stock.add_parser("predict", help="iterative multi-day forecast from a saved model")
    pr.add_argument("--model", required=True)
    pr.add_argument("--csv", required=True)
    pr.add_argument("--days", type=int, default=5)
    _common(pr)
    pr.set_defaults(func=cmd_stock_predict, command_path="stock-predict")

    c = sub.add_parser("chat", help="run the support + QA agent crew on one question")
    c.add_argument("--question", required=True)
    c.add_argument("--person", required=True)
    c.add_argument("--url", help="page for the scrape tool")
    c.add_argument("--endpoint", help="OpenAI-compatible chat-completions URL")
    c.add_argument("--model", default="llama3-8b-8192")
    c.add_argument("--api-key", help="bearer token (default: $FINCAST_API_KEY)")
    c.add_argument("--temperature", type=float, default=0.0)
    c.add_argument("--stub", help="JSON file of scripted replies (offline)")
    c.add_argument("--echo", action="store_true", help="offline backend echoing each prompt")
    _common(c)
    c.set_defaults(func=cmd_chat, command_path="chat")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except CliFailure as exc:
        print(f"fincast: error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
