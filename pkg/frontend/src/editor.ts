/** In-browser scene editor.
 *
 * The textarea holds the proof script for one document.  Edits are debounced
 * and posted to the engine; the reply carries one entry per frame with its
 * colouring (ok / failed) and any advisor suggestions.  Frames before the
 * first changed frame keep their existing DOM nodes so an edit on line k only
 * repaints frames from k onward.
 */

import { ApiClient, EditResult, FrameResult } from './api';

export interface EditorOptions {
  debounceMs?: number;
}

export class SceneEditor {
  readonly element: HTMLElement;
  readonly textarea: HTMLTextAreaElement;
  readonly frameList: HTMLElement;
  readonly adviceWindow: HTMLElement;

  private timer: ReturnType<typeof setTimeout> | null = null;
  private seq = 0;
  private lastFrames: FrameResult[] = [];
  private debounceMs: number;

  /** Called after each applied edit result (tests and callers hook this). */
  onResult: ((result: EditResult) => void) | null = null;

  constructor(
    private api: ApiClient,
    private doc: string,
    container: HTMLElement,
    options: EditorOptions = {}
  ) {
    this.debounceMs = options.debounceMs ?? 300;
    this.element = document.createElement('div');
    this.element.className = 'scene-editor';
    this.textarea = document.createElement('textarea');
    this.textarea.className = 'scene-text';
    this.frameList = document.createElement('div');
    this.frameList.className = 'frame-list';
    this.adviceWindow = document.createElement('div');
    this.adviceWindow.className = 'advice-window';
    this.element.append(this.textarea, this.frameList, this.adviceWindow);
    container.appendChild(this.element);

    this.textarea.addEventListener('input', () => {
      this.markAdviceStale();
      this.scheduleEdit();
    });
  }

  private scheduleEdit(): void {
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.submit();
    }, this.debounceMs);
  }

  /** Post the current text.  A newer edit supersedes any in-flight reply. */
  async submit(): Promise<EditResult | null> {
    const mySeq = ++this.seq;
    let result: EditResult;
    try {
      result = await this.api.postEdit(this.doc, this.textarea.value);
    } catch (err) {
      if (mySeq === this.seq) this.showError(String(err));
      return null;
    }
    if (mySeq !== this.seq) return null; // superseded
    this.applyResult(result);
    if (this.onResult) this.onResult(result);
    return result;
  }

  private showError(message: string): void {
    this.adviceWindow.innerHTML = '';
    const error = document.createElement('div');
    error.className = 'edit-error';
    error.textContent = message;
    this.adviceWindow.appendChild(error);
  }

  /** Index of the first frame that differs from the previous reply. */
  private firstChanged(frames: FrameResult[]): number {
    const n = Math.min(frames.length, this.lastFrames.length);
    for (let i = 0; i < n; i++) {
      const a = frames[i];
      const b = this.lastFrames[i];
      if (a.markup !== b.markup || a.ok !== b.ok || a.state !== b.state) return i;
    }
    return n;
  }

  private applyResult(result: EditResult): void {
    const changed = this.firstChanged(result.frames);
    // Frames before the change point keep their DOM nodes untouched.
    while (this.frameList.children.length > result.frames.length) {
      this.frameList.lastElementChild!.remove();
    }
    result.frames.forEach((frame, i) => {
      if (i < changed && i < this.frameList.children.length) return;
      const node = this.renderFrame(frame);
      const existing = this.frameList.children[i];
      if (existing) existing.replaceWith(node);
      else this.frameList.appendChild(node);
    });
    this.lastFrames = result.frames;
    this.renderAdvice(result.frames);
  }

  private renderFrame(frame: FrameResult): HTMLElement {
    const node = document.createElement('div');
    node.className = frame.ok ? 'frame-row frame-ok' : 'frame-row frame-fail';
    node.dataset.frame = String(frame.id);
    if (frame.markup !== null) node.innerHTML = frame.markup;
    if (frame.state !== null) node.dataset.state = String(frame.state);
    return node;
  }

  private renderAdvice(frames: FrameResult[]): void {
    this.adviceWindow.innerHTML = '';
    for (const frame of frames) {
      for (const line of frame.advice) {
        const item = document.createElement('button');
        item.className = 'advice-item';
        item.dataset.frame = String(frame.id);
        item.textContent = line;
        item.addEventListener('click', () => this.insertAdvice(line));
        this.adviceWindow.appendChild(item);
      }
    }
  }

  /** Append a suggested tactic to the script and resubmit. */
  insertAdvice(line: string): void {
    let text = this.textarea.value;
    if (text !== '' && !text.endsWith('\n')) text += '\n';
    this.textarea.value = text + line + '\n';
    this.markAdviceStale();
    this.scheduleEdit();
  }

  /** Advice computed for an older version of the text is flagged, not removed. */
  private markAdviceStale(): void {
    this.adviceWindow.querySelectorAll<HTMLElement>('.advice-item').forEach((item) => {
      item.classList.add('advice-stale');
    });
  }
}
