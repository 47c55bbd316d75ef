/**
 * Posterior bar chart, rendered as plain DOM rows.
 *
 * Each row carries data-label / data-value attributes with the exact
 * service-payload value; argmax rows get the "argmax" class.
 */

export function renderBars(
  root: HTMLElement,
  posterior: Record<string, number>,
  argmax: string[],
): void {
  const winners = new Set(argmax);
  const entries = Object.entries(posterior).sort((a, b) => b[1] - a[1]);
  root.innerHTML = "";
  for (const [label, value] of entries) {
    const row = root.ownerDocument.createElement("div");
    row.className = winners.has(label) ? "bar-row argmax" : "bar-row";
    row.dataset.label = label;
    row.dataset.value = String(value);

    const name = root.ownerDocument.createElement("span");
    name.className = "bar-label";
    name.textContent = label;

    const track = root.ownerDocument.createElement("span");
    track.className = "bar-track";
    const fill = root.ownerDocument.createElement("span");
    fill.className = "bar-fill";
    fill.style.width = `${(value * 100).toFixed(2)}%`;
    track.appendChild(fill);

    const amount = root.ownerDocument.createElement("span");
    amount.className = "bar-value";
    amount.textContent = value.toFixed(3);

    row.append(name, track, amount);
    root.appendChild(row);
  }
}

/** The values currently on screen, exactly as rendered (for tests and debugging). */
export function readBars(root: HTMLElement): { label: string; value: number; argmax: boolean }[] {
  return Array.from(root.querySelectorAll<HTMLElement>(".bar-row")).map((row) => ({
    label: row.dataset.label ?? "",
    value: Number(row.dataset.value),
    argmax: row.classList.contains("argmax"),
  }));
}
