import { beforeEach, describe, expect, it, vi } from 'vitest';
import { ApiClient, EditResult, FrameResult } from '../src/api';
import { SceneEditor } from '../src/editor';

function frame(id: number, text: string, state: number, ok: boolean, advice: string[] = []): FrameResult {
  return {
    id,
    markup: `<span class="frame" data-frame="${id}">${text}</span>`,
    state,
    ok,
    advice,
    response: ok ? `goal: g${id}` : 'Exception: Failure',
  };
}

function result(frames: FrameResult[], sends = 0): EditResult {
  return { frames, undos: 0, sends, warning: false, text: '' };
}

function editResponder(replies: EditResult[]) {
  let call = 0;
  return vi.fn(async (_url: string, _init?: RequestInit) => {
    const reply = replies[Math.min(call, replies.length - 1)];
    call += 1;
    return { ok: true, status: 200, json: async () => reply } as unknown as Response;
  });
}

describe('SceneEditor', () => {
  beforeEach(() => {
    document.body.innerHTML = '';
  });

  it('an edit at frame k repaints only frames from k onward', async () => {
    const before = result([
      frame(0, 'g `p`;;', 1, true),
      frame(1, 'e TAC_ONE;;', 2, true),
      frame(2, 'e TAC_TWO;;', 3, true),
    ]);
    const after = result([
      frame(0, 'g `p`;;', 1, true),
      frame(1, 'e TAC_ONE;;', 2, true),
      frame(2, 'e BAD_TAC FAIL;;', 3, false),
    ]);
    vi.stubGlobal('fetch', editResponder([before, after]));

    const editor = new SceneEditor(new ApiClient(), 'src/example.ml', document.body, { debounceMs: 0 });
    editor.textarea.value = 'g `p`;;\ne TAC_ONE;;\ne TAC_TWO;;';
    await editor.submit();

    const untouched = Array.from(editor.frameList.children).slice(0, 2);
    editor.textarea.value = 'g `p`;;\ne TAC_ONE;;\ne BAD_TAC FAIL;;';
    await editor.submit();

    // Frames before the edited line keep their exact DOM nodes and colour.
    expect(editor.frameList.children[0]).toBe(untouched[0]);
    expect(editor.frameList.children[1]).toBe(untouched[1]);
    expect(editor.frameList.children[0].classList.contains('frame-ok')).toBe(true);
    expect(editor.frameList.children[1].classList.contains('frame-ok')).toBe(true);
    // The edited frame is recoloured as failed.
    expect(editor.frameList.children[2]).not.toBe(untouched[2]);
    expect(editor.frameList.children[2].classList.contains('frame-fail')).toBe(true);
  });

  it('advisor output for the current goal appears in the advice window', async () => {
    const reply = result([
      frame(0, 'g `p \\/ ~p`;;', 1, true, ['e (TAUT_PROVE);;']),
    ]);
    vi.stubGlobal('fetch', editResponder([reply]));

    const editor = new SceneEditor(new ApiClient(), 'src/example.ml', document.body, { debounceMs: 0 });
    editor.textarea.value = 'g `p \\/ ~p`;;';
    await editor.submit();

    const items = editor.adviceWindow.querySelectorAll('.advice-item');
    expect(items).toHaveLength(1);
    expect(items[0].textContent).toBe('e (TAUT_PROVE);;');
    expect(items[0].classList.contains('advice-stale')).toBe(false);
  });

  it('clicking an advice item inserts the tactic into the script', async () => {
    const reply = result([frame(0, 'g `p ==> p`;;', 1, true, ['e (TAUT_PROVE);;'])]);
    vi.stubGlobal('fetch', editResponder([reply]));
    const editor = new SceneEditor(new ApiClient(), 'src/example.ml', document.body, { debounceMs: 0 });
    editor.textarea.value = 'g `p ==> p`;;';
    await editor.submit();

    const item = editor.adviceWindow.querySelector<HTMLButtonElement>('.advice-item')!;
    item.click();
    expect(editor.textarea.value).toBe('g `p ==> p`;;\ne (TAUT_PROVE);;\n');
    // The displayed advice now refers to an older text and is flagged stale.
    expect(item.classList.contains('advice-stale')).toBe(true);
  });

  it('typing marks previously shown advice as stale', async () => {
    const reply = result([frame(0, 'g `p`;;', 1, true, ['e (TAUT_PROVE);;'])]);
    vi.stubGlobal('fetch', editResponder([reply]));
    const editor = new SceneEditor(new ApiClient(), 'src/example.ml', document.body, { debounceMs: 5 });
    editor.textarea.value = 'g `p`;;';
    await editor.submit();

    editor.textarea.value = 'g `q`;;';
    editor.textarea.dispatchEvent(new Event('input'));
    const item = editor.adviceWindow.querySelector('.advice-item')!;
    expect(item.classList.contains('advice-stale')).toBe(true);
  });

  it('a newer edit supersedes a slower in-flight reply', async () => {
    const slow = result([frame(0, 'old', 1, true)]);
    const fast = result([frame(0, 'new', 1, true)]);
    let call = 0;
    vi.stubGlobal(
      'fetch',
      vi.fn(async () => {
        call += 1;
        if (call === 1) {
          await new Promise((resolve) => setTimeout(resolve, 30));
          return { ok: true, status: 200, json: async () => slow } as unknown as Response;
        }
        return { ok: true, status: 200, json: async () => fast } as unknown as Response;
      })
    );
    const editor = new SceneEditor(new ApiClient(), 'src/example.ml', document.body, { debounceMs: 0 });
    editor.textarea.value = 'first';
    const first = editor.submit();
    editor.textarea.value = 'second';
    const second = editor.submit();
    expect(await first).toBeNull();
    expect((await second)?.frames[0].markup).toContain('new');
    expect(editor.frameList.children[0].textContent).toBe('new');
  });

  it('a rejected edit shows an error without clobbering the frame list', async () => {
    const good = result([frame(0, 'g `p`;;', 1, true)]);
    let call = 0;
    vi.stubGlobal(
      'fetch',
      vi.fn(async () => {
        call += 1;
        if (call === 1) return { ok: true, status: 200, json: async () => good } as unknown as Response;
        return { ok: false, status: 400 } as Response;
      })
    );
    const editor = new SceneEditor(new ApiClient(), 'src/example.ml', document.body, { debounceMs: 0 });
    editor.textarea.value = 'g `p`;;';
    await editor.submit();
    editor.textarea.value = 'g `p (* unterminated';
    await editor.submit();
    expect(editor.adviceWindow.querySelector('.edit-error')?.textContent).toContain('400');
    expect(editor.frameList.children).toHaveLength(1);
  });
});
