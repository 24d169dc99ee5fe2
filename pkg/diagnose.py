"""
Diagnostic script for the multiway join simulator.

Usage:
    python diagnose.py            # full diagnostic
    python diagnose.py config     # settings and machine only
    python diagnose.py engine     # engine vs oracle on a small instance
    python diagnose.py model      # closed forms and one runtime estimate
"""

import sys
import logging
from pathlib import Path

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent))

from src import ExperimentSpec, create_pipeline, default_config, get_settings
from src.perfmodel import (
    CostInputs,
    estimate,
    linear_breakeven_M,
    shape_for,
)

logging.basicConfig(level=logging.WARNING)
logger = logging.getLogger(__name__)


def check_configuration() -> bool:
    """Check settings and the default machine."""
    print("\n🔧 Checking Configuration...")

    try:
        settings = get_settings()
        cfg = default_config()
        print(f"✅ Engine workers: {settings.engine.workers}")
        print(f"✅ Oracle limit: {settings.engine.oracle_limit} tuples")
        print(f"✅ Sweep workers: {settings.model.sweep_workers}")
        print(f"✅ Machine: U={cfg.U}, M={cfg.onchip_bytes} bytes, "
              f"{cfg.dram_bw / 1e9:.0f} GB/s DRAM")

        settings.validate()
        cfg.validate()
        print("✅ Configuration is valid")
        return True

    except Exception as e:
        print(f"❌ Configuration error: {e}")
        return False


def check_engine() -> bool:
    """Run every self-join strategy on a small instance and verify it."""
    print("\n⚙️  Checking Engine...")

    try:
        spec = ExperimentSpec(shape="self-linear", n=2000, d=50, seed=7)
        pipeline = create_pipeline()
        ok = True
        for strategy in spec.strategies:
            state = pipeline.run(spec, strategy, verify=True)
            stats = state["stats"]
            verified = state["verified"]
            mark = "✅" if verified else "❌"
            print(f"{mark} {strategy.value}: {state['aggregate'].total} results, "
                  f"{stats.dram_tuples_read} DRAM tuples read")
            ok = ok and bool(verified)
        return ok

    except Exception as e:
        logger.error(f"Engine check failed: {e}")
        print(f"❌ Engine error: {e}")
        return False


def check_model() -> bool:
    """Check a closed form and one loop-tree estimate."""
    print("\n📐 Checking Model...")

    try:
        sizes = CostInputs(6e11, 6e11, 6e11, M=1)
        crossover = linear_breakeven_M(sizes, 3.6e14)
        print(f"✅ Linear break-even M for N=6e11: {crossover:.4g} tuples")

        cfg = default_config()
        spec = ExperimentSpec(shape="self-linear", n=1_000_000, d=1000)
        strategy = spec.default_strategy
        shape = shape_for(*spec.sizes(), spec.d, cfg)
        result = estimate(strategy, shape, spec.plan_for(strategy, cfg), cfg)
        print(f"✅ {strategy.value} estimate: {result.seconds:.4g} s "
              f"({result.bottleneck}-bound)")
        return True

    except Exception as e:
        print(f"❌ Model error: {e}")
        return False


def run_diagnostic() -> bool:
    """Run full diagnostic test."""
    print("🩺 Running Full Diagnostic...")
    print("=" * 50)

    checks = [
        ("Configuration", check_configuration),
        ("Engine", check_engine),
        ("Model", check_model),
    ]

    results = {}
    for name, check in checks:
        try:
            results[name] = check()
        except Exception as e:
            print(f"❌ {name} failed: {e}")
            results[name] = False

    print("\n📊 Diagnostic Results:")
    print("=" * 30)
    for name, success in results.items():
        status = "✅ PASS" if success else "❌ FAIL"
        print(f"{name}: {status}")

    all_passed = all(results.values())
    verdict = "✅ All checks passed" if all_passed else "❌ Some checks failed"
    print(f"\nOverall: {verdict}")

    return all_passed


def main() -> None:
    """Main function of the diagnostic script."""
    commands = {
        "config": check_configuration,
        "engine": check_engine,
        "model": check_model,
    }
    if len(sys.argv) > 1:
        command = sys.argv[1].lower()
        if command not in commands:
            print(f"Available commands: {', '.join(commands)}")
            print("Or run without arguments for the full diagnostic")
            sys.exit(1)
        sys.exit(0 if commands[command]() else 1)

    sys.exit(0 if run_diagnostic() else 1)


if __name__ == "__main__":
    main()
