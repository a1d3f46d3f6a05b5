"""CLI for the embedding extractor."""

import sys

import click

from .extract import DEFAULT_MODEL, ExtractorConfig, extract, vocab_export


@click.group()
def main():
    """Produce embedding dumps and vocabulary files from a pretrained encoder."""


@main.command("extract")
@click.argument("manifest", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, type=click.Path(dir_okay=False),
              help="Embedding dump (RDCB binary).")
@click.option("--model", default=DEFAULT_MODEL, show_default=True,
              help="Model name or local path; must be uncased if the corpus "
                   "was filtered with lowercasing.")
@click.option("--batch-size", type=int, default=16, show_default=True)
@click.option("--device", default="auto", show_default=True,
              help='"auto", "cpu", or a torch device string.')
def extract_cmd(manifest, out, model, batch_size, device):
    """Embed every variant in MANIFEST and write the dump."""
    config = ExtractorConfig(model=model, batch_size=batch_size, device=device)
    try:
        count = extract(manifest, out, config)
    except (ValueError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    click.echo(f"embedded {count} variants with {model}")


@main.command("vocab-export")
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.option("--model", default=DEFAULT_MODEL, show_default=True)
def vocab_export_cmd(out, model):
    """Write the model's token vocabulary, one token per line."""
    try:
        count = vocab_export(out, ExtractorConfig(model=model))
    except (ValueError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    click.echo(f"wrote {count} tokens")


if __name__ == "__main__":
    main()
