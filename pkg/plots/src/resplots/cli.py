"""plot <kind> --in <csv...> --out <img>

Kinds: resonances, counting, indicator, hregion, compare.  Output format
follows the extension (.svg or .png).
"""

from __future__ import annotations

import click

from .io import (
    EmptyInputError,
    SchemaError,
    read_counting,
    read_indicator,
    read_resonances,
)
from .render import (
    render_compare,
    render_counting,
    render_hregion,
    render_indicator,
    render_resonances,
)

KINDS = ("resonances", "counting", "indicator", "hregion", "compare")


@click.command()
@click.argument("kind", type=click.Choice(KINDS))
@click.option("--in", "inputs", multiple=True, required=True,
              type=click.Path(exists=True), help="input CSV (twice for compare)")
@click.option("--out", "out", required=True, type=click.Path())
@click.option("--title", default=None)
def main(kind, inputs, out, title):
    if not (out.endswith(".svg") or out.endswith(".png")):
        raise click.UsageError("output must end in .svg or .png")
    try:
        if kind == "resonances":
            count = render_resonances(read_resonances(inputs[0]), out, title)
        elif kind == "counting":
            count = render_counting(read_counting(inputs[0]), out, title)
        elif kind == "indicator":
            count = render_indicator(read_indicator(inputs[0]), out, title)
        elif kind == "hregion":
            count = render_hregion(read_indicator(inputs[0]), out, title)
        else:
            if len(inputs) != 2:
                raise click.UsageError("compare needs --in twice")
            count = render_compare(
                read_resonances(inputs[0]), read_resonances(inputs[1]), out
            )
    except (SchemaError, EmptyInputError) as exc:
        raise click.ClickException(str(exc))
    click.echo(f"{kind}: {count} rows -> {out}")


if __name__ == "__main__":
    main()
