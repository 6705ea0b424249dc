// Dependency-free SVG radar charts. Axis order is fixed by the caller and
// preserved exactly; axes without data render hollow markers.

export interface RadarAxis {
  label: string;
  value: number | null; // 1..5 scale, null = no data
}

const SIZE = 280;
const CENTER = SIZE / 2;
const RADIUS = 105;
const MIN_VALUE = 1;
const MAX_VALUE = 5;

function polar(index: number, count: number, radius: number): { x: number; y: number } {
  const angle = (Math.PI * 2 * index) / count - Math.PI / 2;
  return {
    x: CENTER + radius * Math.cos(angle),
    y: CENTER + radius * Math.sin(angle),
  };
}

function scale(value: number): number {
  const clamped = Math.min(MAX_VALUE, Math.max(MIN_VALUE, value));
  return ((clamped - MIN_VALUE) / (MAX_VALUE - MIN_VALUE)) * RADIUS;
}

export function renderRadar(axes: RadarAxis[], title: string): SVGSVGElement {
  const svg = document.createElementNS('http://www.w3.org/2000/svg', 'svg');
  svg.setAttribute('viewBox', `0 0 ${SIZE} ${SIZE}`);
  svg.setAttribute('role', 'img');
  svg.setAttribute('class', 'radar');
  svg.setAttribute('data-axis-count', String(axes.length));
  svg.setAttribute('aria-label', title);

  const count = axes.length;
  // grid rings at scores 1..5
  for (let ring = MIN_VALUE; ring <= MAX_VALUE; ring += 1) {
    const points = axes
      .map((_, index) => {
        const { x, y } = polar(index, count, scale(ring));
        return `${x.toFixed(1)},${y.toFixed(1)}`;
      })
      .join(' ');
    const polygon = document.createElementNS('http://www.w3.org/2000/svg', 'polygon');
    polygon.setAttribute('points', points);
    polygon.setAttribute('class', 'radar-grid');
    svg.appendChild(polygon);
  }

  // spokes + labels
  axes.forEach((axis, index) => {
    const tip = polar(index, count, RADIUS);
    const spoke = document.createElementNS('http://www.w3.org/2000/svg', 'line');
    spoke.setAttribute('x1', String(CENTER));
    spoke.setAttribute('y1', String(CENTER));
    spoke.setAttribute('x2', tip.x.toFixed(1));
    spoke.setAttribute('y2', tip.y.toFixed(1));
    spoke.setAttribute('class', 'radar-spoke');
    svg.appendChild(spoke);

    const labelPos = polar(index, count, RADIUS + 18);
    const label = document.createElementNS('http://www.w3.org/2000/svg', 'text');
    label.setAttribute('x', labelPos.x.toFixed(1));
    label.setAttribute('y', labelPos.y.toFixed(1));
    label.setAttribute('text-anchor', 'middle');
    label.setAttribute('class', 'radar-label');
    label.setAttribute('data-axis', axis.label);
    label.textContent = axis.value === null ? `${axis.label} (no data)` : axis.label;
    svg.appendChild(label);
  });

  // value polygon over axes that have data
  const populated = axes.filter((axis) => axis.value !== null);
  if (populated.length > 0) {
    const points = axes
      .map((axis, index) => {
        const radius = axis.value === null ? 0 : scale(axis.value);
        const { x, y } = polar(index, count, radius);
        return `${x.toFixed(1)},${y.toFixed(1)}`;
      })
      .join(' ');
    const polygon = document.createElementNS('http://www.w3.org/2000/svg', 'polygon');
    polygon.setAttribute('points', points);
    polygon.setAttribute('class', 'radar-value');
    svg.appendChild(polygon);
  }

  axes.forEach((axis, index) => {
    if (axis.value === null) return;
    const { x, y } = polar(index, count, scale(axis.value));
    const dot = document.createElementNS('http://www.w3.org/2000/svg', 'circle');
    dot.setAttribute('cx', x.toFixed(1));
    dot.setAttribute('cy', y.toFixed(1));
    dot.setAttribute('r', '3.5');
    dot.setAttribute('class', 'radar-dot');
    dot.setAttribute('data-axis', axis.label);
    dot.setAttribute('data-value', axis.value.toFixed(2));
    svg.appendChild(dot);
  });

  return svg;
}

export interface TrendSeries {
  label: string;
  points: { x: number; value: number | null }[];
}

// Simple multi-series line chart for trajectories: x positions are evenly
// spaced assessment indices, y is the 1..5 score scale.
export function renderTrend(series: TrendSeries[], xLabels: string[]): SVGSVGElement {
  const width = 420;
  const height = 220;
  const left = 36;
  const bottom = height - 28;
  const top = 16;
  const right = width - 12;
  const svg = document.createElementNS('http://www.w3.org/2000/svg', 'svg');
  svg.setAttribute('viewBox', `0 0 ${width} ${height}`);
  svg.setAttribute('class', 'trend');

  const spanX = Math.max(1, xLabels.length - 1);
  const xAt = (index: number) => left + ((right - left) * index) / spanX;
  const yAt = (value: number) =>
    bottom - ((bottom - top) * (Math.min(5, Math.max(1, value)) - 1)) / 4;

  for (let grid = 1; grid <= 5; grid += 1) {
    const line = document.createElementNS('http://www.w3.org/2000/svg', 'line');
    line.setAttribute('x1', String(left));
    line.setAttribute('x2', String(right));
    line.setAttribute('y1', yAt(grid).toFixed(1));
    line.setAttribute('y2', yAt(grid).toFixed(1));
    line.setAttribute('class', 'trend-grid');
    svg.appendChild(line);
    const tick = document.createElementNS('http://www.w3.org/2000/svg', 'text');
    tick.setAttribute('x', String(left - 8));
    tick.setAttribute('y', (yAt(grid) + 4).toFixed(1));
    tick.setAttribute('text-anchor', 'end');
    tick.setAttribute('class', 'trend-tick');
    tick.textContent = String(grid);
    svg.appendChild(tick);
  }

  xLabels.forEach((label, index) => {
    const text = document.createElementNS('http://www.w3.org/2000/svg', 'text');
    text.setAttribute('x', xAt(index).toFixed(1));
    text.setAttribute('y', String(height - 8));
    text.setAttribute('text-anchor', 'middle');
    text.setAttribute('class', 'trend-tick');
    text.textContent = label;
    svg.appendChild(text);
  });

  series.forEach((entry, seriesIndex) => {
    const segments = entry.points
      .filter((point) => point.value !== null)
      .map((point) => `${xAt(point.x).toFixed(1)},${yAt(point.value as number).toFixed(1)}`);
    if (segments.length === 0) return;
    const path = document.createElementNS('http://www.w3.org/2000/svg', 'polyline');
    path.setAttribute('points', segments.join(' '));
    path.setAttribute('class', `trend-line trend-line-${seriesIndex}`);
    path.setAttribute('data-series', entry.label);
    svg.appendChild(path);
  });

  return svg;
}
