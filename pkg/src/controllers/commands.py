"""
Comandos da CLI
DESCRIÇÃO: Liga os subcomandos aos services e grava artefatos com manifest
REGRAS DE NEGÓCIO:
    - Cada comando devolve o código de saída (0 sucesso, 1 validação, 2 E/S)
    - Toda saída vai acompanhada de manifest com entradas (sha256), semente, versão e configuração
    - Mesmas flags e semente com --threads 1 -> arquivos idênticos byte a byte
"""

import argparse
import logging
import sys
from contextlib import nullcontext
from pathlib import Path
from typing import Callable, Dict, List, Optional

from src.application.dtos import GradcheckReport
from src.domain.entities import AnnotationRecord, LandmarkSet
from src.domain.value_objects import LossMode
from src.infrastructure.logging import get_metrics_collector
from src.infrastructure.storage import (
    build_manifest,
    dataframe_to_csv_bytes,
    read_bytes,
    read_ghmp,
    write_bytes,
    write_csv,
    write_ghmp,
    write_manifest,
)
from src.services.annotation_service import parse_dataset, write_dataset
from src.services.heatmap_service import LatticeTransform, decode_argmax, decode_soft_argmax, encode_gaussian
from src.services.metrics_service import evaluate_corpus
from src.services.report_service import TRAIN_REPORT_NAME, merge_runs, reference_lines
from src.services.synth_service import SynthOptions, generate_dataset, split_counts
from src.services.training.experiments import run_ablation, run_lambda_sweep
from src.services.training.gradcheck import GradcheckConfig, gradcheck
from src.services.training.schedule import LrSchedule
from src.services.training.trainer import TrainConfig, Trainer
from src.utils.config import Settings
from src.utils.error_handler import EXIT_OK, EXIT_VALIDATION, handle_errors
from src.utils.exceptions import PairingError, ParameterError

logger = logging.getLogger(__name__)

Command = Callable[[argparse.Namespace, Settings], int]


def _arguments(args: argparse.Namespace) -> Dict[str, object]:
    """Flags ecoadas no manifest (sem o nome do comando)"""
    return {chave: valor for chave, valor in sorted(vars(args).items()) if chave not in ('command', 'handler')}


def _manifest(args: argparse.Namespace, settings: Settings, out: Path, is_dir: bool,
              inputs: List[Path], outputs: List[Path], seed: Optional[int]) -> Path:
    manifest = build_manifest(args.command, inputs, outputs, seed, settings.as_sections(), _arguments(args))
    return write_manifest(out, is_dir, manifest)


def _timed(nome: str):
    coletor = get_metrics_collector()
    if coletor is None:
        return nullcontext()
    return coletor.time_operation(nome)


# ============================================
# DADOS
# ============================================

@handle_errors
def cmd_synth(args: argparse.Namespace, settings: Settings) -> int:
    """Gera train.json, val.json e test.json"""
    options = SynthOptions(
        n_images=args.n,
        split=split_counts(args.split),
        seed=args.seed,
        noise_sigma=args.noise_sigma,
        width=args.width,
        height=args.height,
        spacing_mm_per_px=args.spacing,
    )
    out = Path(args.out)
    with _timed("synth"):
        caminhos = generate_dataset(out, options, threads=args.threads)
    _manifest(args, settings, out, True, [], list(caminhos.values()), args.seed)
    return EXIT_OK


@handle_errors
def cmd_encode(args: argparse.Namespace, settings: Settings) -> int:
    """Anotações -> heatmaps alvo GHMP na grade width x height"""
    entrada = Path(args.annotations)
    records = parse_dataset(read_bytes(entrada))
    if args.image_id is not None:
        records = [r for r in records if r.image_id == args.image_id]
        if not records:
            raise PairingError([], [args.image_id])

    out = Path(args.out)
    arquivo_unico = out.suffix == ".ghmp"
    if arquivo_unico and len(records) != 1:
        raise ParameterError("--out", str(out), f"um .ghmp recebe um registro ({len(records)} dados); use --image-id")

    saidas: List[Path] = []
    with _timed("encode"):
        for record in records:
            transform = LatticeTransform.fit(record.width, record.height, args.width, args.height)
            stack = encode_gaussian(transform.to_lattice(record.landmarks.coords), args.width, args.height,
                                    args.sigma)
            destino = out if arquivo_unico else out / f"{record.image_id}.ghmp"
            saidas.append(write_bytes(destino, write_ghmp(stack)))
    logger.info(f"{len(saidas)} heatmaps codificados em {out}")
    _manifest(args, settings, out, not arquivo_unico, [entrada], saidas, None)
    return EXIT_OK


@handle_errors
def cmd_decode(args: argparse.Namespace, settings: Settings) -> int:
    """GHMP -> arquivo de predições; --reference volta para pixels da imagem"""
    origem = Path(args.heatmaps)
    arquivos = sorted(origem.glob("*.ghmp")) if origem.is_dir() else [origem]
    if not arquivos:
        raise ParameterError("--heatmaps", str(origem), "nenhum arquivo .ghmp encontrado")

    referencias: Dict[str, AnnotationRecord] = {}
    entradas = list(arquivos)
    if args.reference:
        entradas.append(Path(args.reference))
        referencias = {r.image_id: r for r in parse_dataset(read_bytes(args.reference))}

    predicoes: List[AnnotationRecord] = []
    with _timed("decode"):
        for arquivo in arquivos:
            stack = read_ghmp(read_bytes(arquivo))
            if args.mode == "argmax":
                coords = decode_argmax(stack).as_array()
            else:
                coords = decode_soft_argmax(stack, args.temperature).as_array()

            image_id = arquivo.stem
            if args.reference:
                if image_id not in referencias:
                    raise PairingError([image_id], [])
                ref = referencias[image_id]
                transform = LatticeTransform.fit(ref.width, ref.height, stack.width, stack.height)
                predicoes.append(ref.with_landmarks(LandmarkSet(transform.to_image(coords), unchecked=True)))
            else:
                predicoes.append(AnnotationRecord(
                    image_id=image_id, width=stack.width, height=stack.height, spacing_mm_per_px=1.0,
                    landmarks=LandmarkSet(coords, unchecked=True),
                ))

    out = Path(args.out)
    write_bytes(out, write_dataset(predicoes))
    _manifest(args, settings, out, False, entradas, [out], None)
    return EXIT_OK


# ============================================
# AVALIAÇÃO
# ============================================

@handle_errors
def cmd_eval(args: argparse.Namespace, settings: Settings) -> int:
    """Métricas em <out> e MRE por landmark em <stem>_per_landmark.csv"""
    pred, gt = Path(args.pred), Path(args.gt)
    with _timed("eval"):
        report = evaluate_corpus(read_bytes(pred), read_bytes(gt), args.thresholds,
                                 spacing=args.spacing, threads=args.threads)
    out = Path(args.out)
    por_landmark = out.with_name(f"{out.stem}_per_landmark.csv")
    write_csv(out, report.to_dataframe())
    write_csv(por_landmark, report.per_landmark_dataframe())
    logger.info(f"Linha da tabela: {report.table_row()}")
    _manifest(args, settings, out, False, [pred, gt], [out, por_landmark], None)
    return EXIT_OK


# ============================================
# TREINO E EXPERIMENTOS
# ============================================

def train_config(args: argparse.Namespace, settings: Settings, lam: Optional[float] = None) -> TrainConfig:
    """TrainConfig a partir das flags, completando com Settings"""
    return TrainConfig(
        mode=args.mode,
        lam=args.lam if lam is None else lam,
        temperature=args.temperature,
        sigma=args.sigma,
        loss_mode=LossMode.from_string(args.loss_mode),
        epochs=args.epochs,
        batch=args.batch,
        seed=args.seed,
        width=args.width,
        height=args.height,
        schedule=LrSchedule(
            base_lr=args.lr,
            warmup_steps=args.warmup_steps,
            warmup_start_factor=settings.warmup_start_factor,
            milestones=tuple(args.milestones),
            gamma=settings.gamma,
        ),
        beta1=settings.beta1,
        beta2=settings.beta2,
        eps=settings.eps,
        weight_decay=settings.weight_decay,
        lora_rank=settings.lora_rank,
        lora_alpha=settings.lora_alpha,
        feature_dim=settings.feature_dim,
        base_scale=settings.base_scale,
        eps_iso=settings.eps_iso,
        eps_abs=settings.eps_abs,
        threads=args.threads,
    )


def _load_splits(args: argparse.Namespace):
    train_path, val_path = Path(args.train), Path(args.val)
    return train_path, val_path, parse_dataset(read_bytes(train_path)), parse_dataset(read_bytes(val_path))


@handle_errors
def cmd_train(args: argparse.Namespace, settings: Settings) -> int:
    """train_report.csv, loss_geo_curve.csv, predictions_val.json e manifest.json"""
    train_path, val_path, train, val = _load_splits(args)
    config = train_config(args, settings)
    with _timed("train"):
        report = Trainer(config).train(train, val)

    out = Path(args.out)
    saidas = [
        write_csv(out / TRAIN_REPORT_NAME, report.to_dataframe(), report.header_lines()),
        write_csv(out / "loss_geo_curve.csv", report.curve_dataframe()),
        write_bytes(out / "predictions_val.json", write_dataset(report.predictions_val)),
    ]
    _manifest(args, settings, out, True, [train_path, val_path], saidas, args.seed)
    return EXIT_OK


@handle_errors
def cmd_sweep(args: argparse.Namespace, settings: Settings) -> int:
    """sweep.csv com uma linha por λ e λ* no cabeçalho"""
    train_path, val_path, train, val = _load_splits(args)
    config = train_config(args, settings, lam=0.0)
    with _timed("sweep"):
        report = run_lambda_sweep(train, val, config, args.lambdas)
    out = Path(args.out)
    saida = write_csv(out / "sweep.csv", report.to_dataframe(), report.header_lines())
    _manifest(args, settings, out, True, [train_path, val_path], [saida], args.seed)
    return EXIT_OK


@handle_errors
def cmd_ablate(args: argparse.Namespace, settings: Settings) -> int:
    """ablation.csv com a matriz {full, lora} x {sem, com geo}"""
    train_path, val_path, train, val = _load_splits(args)
    config = train_config(args, settings)
    with _timed("ablate"):
        report = run_ablation(train, val, config)
    out = Path(args.out)
    saida = write_csv(out / "ablation.csv", report.to_dataframe(), report.header_lines())
    _manifest(args, settings, out, True, [train_path, val_path], [saida], args.seed)
    return EXIT_OK


# ============================================
# GRADCHECK E RELATÓRIO
# ============================================

@handle_errors
def cmd_gradcheck(args: argparse.Namespace, settings: Settings) -> int:
    """Relatório component,max_rel_err,status; código 1 se algum componente falhar"""
    config = GradcheckConfig(
        instances=args.instances,
        step=settings.gradcheck_step,
        tolerance=settings.gradcheck_tolerance,
        temperature=settings.temperature,
        sigma=settings.sigma,
        lam=args.lam,
        loss_mode=LossMode.from_string(args.loss_mode),
        probe_pixels=settings.gradcheck_probe_pixels,
        inject_degenerate=args.inject_degenerate,
    )
    with _timed("gradcheck"):
        report: GradcheckReport = gradcheck(config, seed=args.seed, threads=args.threads)

    conteudo = dataframe_to_csv_bytes(report.to_dataframe())
    if args.out:
        out = Path(args.out)
        write_bytes(out, conteudo)
        _manifest(args, settings, out, False, [], [out], args.seed)
    else:
        sys.stdout.write(conteudo.decode('utf-8'))

    if not report.passed:
        falhas = [e.component for e in report.entries if not e.passed]
        print(f"erro: gradcheck acima da tolerância em {', '.join(falhas)}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


@handle_errors
def cmd_report(args: argparse.Namespace, settings: Settings) -> int:
    """CSV consolidado precedido das linhas '# reference:'"""
    tabela = merge_runs(args.runs)
    out = Path(args.out)
    write_csv(out, tabela, reference_lines())
    entradas = [Path(d) / TRAIN_REPORT_NAME for d in args.runs]
    _manifest(args, settings, out, False, entradas, [out], None)
    return EXIT_OK


COMMANDS: Dict[str, Command] = {
    'synth': cmd_synth,
    'encode': cmd_encode,
    'decode': cmd_decode,
    'eval': cmd_eval,
    'train': cmd_train,
    'gradcheck': cmd_gradcheck,
    'report': cmd_report,
    'sweep': cmd_sweep,
    'ablate': cmd_ablate,
}
