// Preview dialog: slider range, image swapping, series navigation rules.

import { afterEach, describe, expect, it } from 'vitest';

import { createPreviewDialog } from '../src/views/preview';
import type { SeriesManifest } from '../src/types';

function manifest(seriesUid: string, count: number): SeriesManifest {
  return {
    study_uid: '1.2.3.1',
    series_uid: seriesUid,
    entries: Array.from({ length: count }, (_, i) => ({
      instance_number: i + 1,
      sop_uid: `${seriesUid}.${i + 1}`,
      files: { viewer: `img_${String(i + 1).padStart(4, '0')}.jpg` },
    })),
    errors: [],
  };
}

const imageUrl = (seriesUid: string, name: string) =>
  `http://gw.test/previews/1.2.3.1/${seriesUid}/${name}`;

afterEach(() => {
  document.body.innerHTML = '';
});

describe('preview dialog', () => {
  it('slider range equals the series length and swaps the image', () => {
    const dialog = createPreviewDialog({
      manifests: [manifest('1.2.3.1.1', 3)],
      imageUrl,
    });
    document.body.appendChild(dialog.el);
    expect(dialog.slider.min).toBe('1');
    expect(dialog.slider.max).toBe('3');
    const sources: string[] = [dialog.image.src];
    for (const position of [2, 3]) {
      dialog.slider.value = String(position);
      dialog.slider.dispatchEvent(new Event('input'));
      sources.push(dialog.image.src);
    }
    expect(new Set(sources).size).toBe(3);
    expect(sources[2]).toContain('img_0003.jpg');
  });

  it('series switch buttons appear only for multi-series studies', () => {
    const multi = createPreviewDialog({
      manifests: [manifest('1.2.3.1.1', 3), manifest('1.2.3.1.2', 2)],
      imageUrl,
    });
    expect(multi.el.querySelector('[data-action="prev-series"]')).not.toBeNull();
    expect(multi.el.querySelector('[data-action="next-series"]')).not.toBeNull();

    const single = createPreviewDialog({
      manifests: [manifest('1.2.3.1.1', 3)],
      imageUrl,
    });
    expect(single.el.querySelector('[data-action="prev-series"]')).toBeNull();
    expect(single.el.querySelector('[data-action="next-series"]')).toBeNull();
  });

  it('switching series resets the slider to the new length', () => {
    const dialog = createPreviewDialog({
      manifests: [manifest('1.2.3.1.1', 3), manifest('1.2.3.1.2', 2)],
      imageUrl,
    });
    dialog.setSlice(3);
    expect(dialog.slider.value).toBe('3');
    (dialog.el.querySelector('[data-action="next-series"]') as HTMLButtonElement).click();
    expect(dialog.currentSeries().series_uid).toBe('1.2.3.1.2');
    expect(dialog.slider.max).toBe('2');
    expect(dialog.slider.value).toBe('1');
    expect(dialog.image.src).toContain('1.2.3.1.2/img_0001.jpg');
  });

  it('keeps the aspect-preserving image style', () => {
    const dialog = createPreviewDialog({
      manifests: [manifest('1.2.3.1.1', 1)],
      imageUrl,
    });
    // Scaling is done by the stylesheet's object-fit rule on this class.
    expect(dialog.image.classList.contains('preview-image')).toBe(true);
  });
});
