/** Island toggling: a labeled `<details class="island">` block hides the
 * transcluded formal text behind its summary until the reader expands it. */

export function attachIslands(root: ParentNode): void {
  root.querySelectorAll<HTMLDetailsElement>('details.island').forEach((island) => {
    island.addEventListener('toggle', () => {
      island.classList.toggle('island-open', island.open);
    });
  });
}

/** Is the formal body of the island currently revealed? */
export function islandRevealed(island: HTMLDetailsElement): boolean {
  if (!island.open) return false;
  // Any visible content besides the summary counts as the formal body.
  return Array.from(island.children).some(
    (child) => child.tagName.toLowerCase() !== 'summary' && (child.textContent ?? '').trim() !== ''
  );
}
