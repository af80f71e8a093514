"""
Tower reports: the kernel grid and its CSV / JSON / xlsx / pdf renderings.

CSV and JSON output is byte-for-byte reproducible for identical inputs.
"""

import csv
import hashlib
import io
import json
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

import openpyxl
from reportlab.lib import colors
from reportlab.lib.pagesizes import landscape, letter
from reportlab.lib.styles import getSampleStyleSheet
from reportlab.platypus import Paragraph, SimpleDocTemplate, Spacer, Table, TableStyle

CSV_COLUMNS = ['n', 'm', 'kernel_order_exp', 'kernel_p_rank']

TABLE_STYLE = [
    ('BACKGROUND', (0, 0), (-1, 0), colors.grey),
    ('TEXTCOLOR', (0, 0), (-1, 0), colors.whitesmoke),
    ('ALIGN', (0, 0), (-1, -1), 'CENTER'),
    ('FONTNAME', (0, 0), (-1, 0), 'Helvetica-Bold'),
    ('BOTTOMPADDING', (0, 0), (-1, 0), 12),
    ('GRID', (0, 0), (-1, -1), 1, colors.black),
]


@dataclass(frozen=True)
class GridEntry:
    n: int
    m: int
    order_exp: int
    p_rank: int
    divisors: tuple
    raw_order_exp: int
    raw_p_rank: int

    @classmethod
    def from_kernel(cls, entry):
        stable, raw = entry.invariants, entry.raw
        return cls(entry.n, entry.m, stable.order_exp, stable.p_rank, stable.divisors,
                   raw.order_exp, raw.p_rank)


@dataclass(frozen=True)
class QuotientEntry:
    n: int
    order_exp: int
    p_rank: int
    divisors: tuple


@dataclass(frozen=True)
class StabilizationEntry:
    n: int
    stable_from: int
    stabilized: bool


@dataclass(frozen=True)
class RankGrowthRow:
    n: int
    rank: int
    rank_next_precision: int
    stable: bool
    leading: object


@dataclass
class TowerReport:
    config: dict
    input: dict
    grid: list
    quotients: list
    stabilization: list
    compatible_chains: int
    chain_method: str
    metadata: dict = field(default_factory=dict)

    @property
    def max_order_exp(self):
        return max((entry.order_exp for entry in self.grid), default=0)

    @property
    def input_digest(self):
        canonical = json.dumps(self.input, sort_keys=True, separators=(',', ':'))
        return hashlib.sha256(canonical.encode()).hexdigest()

    @property
    def summary(self):
        return {
            'max_order_exp': self.max_order_exp,
            'compatible_chains': self.compatible_chains,
            'chain_method': self.chain_method,
        }

    def entry(self, n, m):
        return next(e for e in self.grid if (e.n, e.m) == (n, m))

    def summary_line(self):
        p = self.config['p']
        return (
            f"max kernel order {p}^{self.max_order_exp}; "
            f"compatible chains {self.compatible_chains} ({self.chain_method})"
        )

    def to_csv(self):
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(CSV_COLUMNS)
        for entry in self.grid:
            writer.writerow([entry.n, entry.m, entry.order_exp, entry.p_rank])
        return buffer.getvalue()

    def to_json(self):
        from .serializers import TowerReportSerializer

        return json.dumps(TowerReportSerializer(self).data, indent=2, ensure_ascii=False) + '\n'

    def write(self, prefix):
        """Write prefix.csv and prefix.json; returns both paths."""
        paths = (f"{prefix}.csv", f"{prefix}.json")
        with open(paths[0], 'w', encoding='utf-8', newline='') as handle:
            handle.write(self.to_csv())
        with open(paths[1], 'w', encoding='utf-8') as handle:
            handle.write(self.to_json())
        return paths

    def write_xlsx(self, path):
        wb = openpyxl.Workbook()
        ws = wb.active
        ws.title = "Kernel grid"

        headers = ['n', 'm', 'Kernel order exp', 'Kernel p-rank', 'Raw order exp', 'Raw p-rank']
        ws.append(headers)
        for col in range(1, len(headers) + 1):
            ws.cell(row=1, column=col).font = openpyxl.styles.Font(bold=True)

        for entry in self.grid:
            ws.append([entry.n, entry.m, entry.order_exp, entry.p_rank,
                       entry.raw_order_exp, entry.raw_p_rank])

        last_row = len(self.grid) + 3
        ws.cell(row=last_row, column=1, value="SUMMARY").font = openpyxl.styles.Font(bold=True)
        ws.cell(row=last_row, column=3, value=self.max_order_exp).font = openpyxl.styles.Font(bold=True)
        ws.cell(row=last_row, column=4, value=self.compatible_chains).font = openpyxl.styles.Font(bold=True)
        ws.cell(row=last_row, column=5, value=self.chain_method).font = openpyxl.styles.Font(bold=True)

        quotients = wb.create_sheet("Quotients")
        quotients.append(['n', 'Order exp', 'p-rank', 'Divisors'])
        for col in range(1, 5):
            quotients.cell(row=1, column=col).font = openpyxl.styles.Font(bold=True)
        for entry in self.quotients:
            quotients.append([entry.n, entry.order_exp, entry.p_rank, ", ".join(map(str, entry.divisors))])

        wb.save(path)
        return path

    def write_pdf(self, path):
        doc = SimpleDocTemplate(str(path), pagesize=landscape(letter), invariant=1)
        elements = []
        styles = getSampleStyleSheet()

        config = ", ".join(f"{key}={value}" for key, value in self.config.items())
        elements.append(Paragraph(escape(f"Tower report ({config})"), styles['Title']))
        elements.append(Paragraph(
            escape("Input: " + "; ".join(f"{key}={value}" for key, value in self.input.items())), styles['Normal']
        ))
        elements.append(Spacer(1, 20))

        summary_data = [
            ['Max kernel order exp', 'Compatible chains', 'Method'],
            [str(self.max_order_exp), str(self.compatible_chains), self.chain_method],
        ]
        t_summary = Table(summary_data, colWidths=[140, 140, 100])
        t_summary.setStyle(TableStyle(TABLE_STYLE))
        elements.append(t_summary)
        elements.append(Spacer(1, 20))

        table_data = [['n', 'm', 'Order exp', 'p-rank', 'Raw order exp', 'Raw p-rank']]
        for entry in self.grid:
            table_data.append([str(entry.n), str(entry.m), str(entry.order_exp), str(entry.p_rank),
                               str(entry.raw_order_exp), str(entry.raw_p_rank)])
        t = Table(table_data, colWidths=[40, 40, 80, 80, 90, 80])
        t.setStyle(TableStyle(TABLE_STYLE + [
            ('BACKGROUND', (0, 1), (-1, -1), colors.beige),
            ('FONTSIZE', (0, 1), (-1, -1), 8),
        ]))
        elements.append(t)

        doc.build(elements)
        return path
